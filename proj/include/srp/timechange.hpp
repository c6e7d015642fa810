#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "srp/intensity.hpp"
#include "srp/ranking_sim.hpp"
#include "srp/rng.hpp"

namespace srp {

/// Zipf weights w_i = a (N/i)^{1/b}, i = 1..N.
struct ZipfFamily {
    double a = 1.0;
    double b = 1.0;
    std::size_t n = 1;
};

struct ZipfSums {
    std::vector<double> weights;
    double subset_total;  // Z(N,n), first n weights
    double total;         // Z(N)
};

std::vector<double> zipf_weights(const ZipfFamily& family);

/// Exact finite sums; never the asymptotic form.
ZipfSums zipf_weights_and_Z(const ZipfFamily& family, std::size_t subset);

/// Large-N form of Z(N): aNb/(b-1), aN log N, or aN^{1/b} ζ(1/b).
double zipf_Z_asymptotic(const ZipfFamily& family);

/// Pareto tail λ([w,∞)) = (a/w)^b for w >= a, else 1.
double pareto_tail(double a, double b, double w);

/// Fraction of weights >= w.
double empirical_weight_tail(std::span<const double> weights, double w);

/// Which closed form of the ranking curve x_b^N(S) to evaluate.
///  - Sum: N - Σ_i exp(-w_i S / Z(N)) over the finite Zipf population.
///  - ParetoIntegral: N - b (S/ζ_N)^b Γ(-b, S/(N^{1/b} ζ_N)), the Pareto
///    limit integral.
///  - Gamma: N - N e^{-x} + (S/ζ_N)^b Γ(1-b, x), x = S/(N^{1/b} ζ_N);
///    the ParetoIntegral form after integration by parts.
/// ParetoIntegral and Gamma need 0 < b < 1.
enum class CurveForm { Sum, ParetoIntegral, Gamma };

struct RankingCurve {
    std::size_t n;
    double b;
    double zeta_n;  // ζ_N(1/b)
    CurveForm form;

    static RankingCurve make(std::size_t n, double b, CurveForm form);
};

/// Expected position x_b^N(S) after S total jumps since a particle's jump.
double x_b_curve(const RankingCurve& curve, double s);

/// Sum form with an explicit Zipf scale a; a cancels against Z(N).
double x_b_sum(const ZipfFamily& family, double s);

struct PeriodicShift {
    double periodic_part;   // A_p(t0) = A(t0) - t0
    double shifted_origin;  // t0 + A_p(t0)
};

/// Throws std::invalid_argument when the profile's period mean is not 1.
PeriodicShift periodic_shift(const ActivityProfile& profile, double t0);

/// 1 - Σ r_α exp(-w_α (nT + t0 + A_p(t0))) for a mixture of common-profile
/// atoms sharing one periodic profile: the boundary sampled at
/// t_n = t0 + nT written as a homogeneous formula with shifted origin.
double sampled_boundary_shifted(const MixtureSpec& mixture, double t0, std::size_t n);

/// Particles with intensities w_i ã(t) for the given weights; particle i
/// starts at rank i+1. All particles share class 0.
ParticleSystem common_profile_system(std::span<const double> weights, const ActivityProfile& profile,
                                     double horizon, Rng& rng);

/// Y_C(s(Z t)): the boundary read on the total-jump clock. Throws
/// std::out_of_range when Z t reaches the recorded jump count.
double timechange_observable(const ParticleSystem& system, double z_total, double t);

/// 1 - (1/N) Σ_i exp(-w_i t).
double timechange_limit(std::span<const double> weights, double t);

}  // namespace srp
