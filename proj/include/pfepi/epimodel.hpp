#ifndef PFEPI_EPIMODEL_HPP
#define PFEPI_EPIMODEL_HPP

#include <array>
#include <cstdint>
#include <numeric>

#include "pfepi/distributions.hpp"
#include "pfepi/rng.hpp"

namespace pfepi {

// Compile-time caps on residence times (days); runtime support is validated
// against these so compartment queues can live in fixed arrays.
inline constexpr int kMaxExposedDays = 16;
inline constexpr int kMaxInfectiousDays = 16;
inline constexpr int kMaxPresymptomaticDays = 16;
inline constexpr int kMaxHospitalDays = 24;

// Daily random-walk scales and truncation intervals for the latent
// parameters estimated from observations.
inline constexpr double kContactWalkSigma = 0.05;
inline constexpr double kContactMin = 0.0;
inline constexpr double kContactMax = 1.0;
inline constexpr double kDeathProbWalkSigma = 0.0025;
inline constexpr double kDeathProbMin = 0.0;
inline constexpr double kDeathProbMax = 0.05;
inline constexpr double kHospMeanWalkSigma = 0.75;
inline constexpr double kHospMeanMin = 4.0;
inline constexpr double kHospMeanMax = 19.0;

/// Static model constants: branch probabilities, residence-time
/// distributions, daily offspring distribution, relative infectivity.
struct FixedParams {
    double p_as = 0.83;    // I_a -> I_s, developing clear symptoms
    double p_a_inf = 0.17; // I_a -> removed, never symptomatic
    double p_sh = 0.78;    // I_s -> H, contacts health authorities
    double p_s_inf = 0.22; // I_s -> removed, self-quarantines
    double k = 0.58;       // relative infectivity of asymptomatic agents
    int t_e = 3;           // incubation days

    DiscreteDistribution dist_t_a_inf; // days in I_a before recovery (asymptomatic)
    DiscreteDistribution dist_t_as;    // days in I_a before symptoms
    DiscreteDistribution dist_t_sh;    // days in I_s before hospitalization

    std::array<double, 6> offspring{}; // daily secondary-case distribution p_0..p_5

    // Derived in finalize().
    double e_sc = 0.0;          // expected daily secondary cases
    double mean_t_a_inf = 0.0;  // E(T_a_inf)
    double mean_t_as = 0.0;     // E(T_as)

    static FixedParams defaults();

    /// Recomputes derived quantities and validates; throws ConfigError.
    void finalize();
};

/// The three latent quantities evolved by daily truncated-normal walks.
struct DynamicParams {
    double contact_rate = 0.0;  // r_t in [0,1]
    double p_hd = 0.0;          // death probability from H, in [0, 0.05]
    double mean_t_h = 15.0;     // expected days in H, in [4, 19]
};

/// Compartment occupancies as cohort queues: slot j holds the number of
/// agents leaving the compartment during the advance j+1 days from now.
struct CompartmentState {
    std::array<std::int64_t, kMaxExposedDays> e_queue{};
    std::array<std::int64_t, kMaxInfectiousDays> ia_asym_queue{};
    std::array<std::int64_t, kMaxInfectiousDays> ia_sym_queue{};
    std::array<std::int64_t, kMaxPresymptomaticDays> is_queue{};
    std::array<std::int64_t, kMaxHospitalDays> h_to_r_queue{};
    std::array<std::int64_t, kMaxHospitalDays> h_to_d_queue{};

    std::int64_t r_cum = 0;             // recovered after treatment
    std::int64_t d_cum = 0;             // deceased
    std::int64_t removed_asym_cum = 0;  // recovered without symptoms
    std::int64_t removed_selfq_cum = 0; // self-quarantined, never recorded
    std::int64_t infected_cum = 0;      // infections generated after day 0
    std::int64_t initial_seed = 0;

    std::int64_t ia_asym_total() const { return sum(ia_asym_queue); }
    std::int64_t ia_sym_total() const { return sum(ia_sym_queue); }
    std::int64_t h_stock() const { return sum(h_to_r_queue) + sum(h_to_d_queue); }
    std::int64_t queued_total() const
    {
        return sum(e_queue) + sum(ia_asym_queue) + sum(ia_sym_queue) + sum(is_queue) +
               sum(h_to_r_queue) + sum(h_to_d_queue);
    }

    /// Every agent ever created is still queued or in a terminal counter.
    bool conserves() const
    {
        return infected_cum + initial_seed ==
               queued_total() + r_cum + d_cum + removed_asym_cum + removed_selfq_cum;
    }

private:
    template <std::size_t N>
    static std::int64_t sum(const std::array<std::int64_t, N>& q)
    {
        return std::accumulate(q.begin(), q.end(), std::int64_t{0});
    }
};

/// One independent realization of the epidemic carried by the filter.
struct Particle {
    CompartmentState state;
    DynamicParams dyn;
    double weight = 0.0;
    std::int64_t index = 0;    // current ensemble slot
    std::uint64_t rng_id = 0;  // stream identity; refreshed on resampling
};

// Purpose tags for per-(particle, day) stream derivation.
enum class Draw : std::uint64_t {
    init = 1,
    param_walk = 2,
    infect = 3,
    exposed_exit = 4,
    presym_exit = 5,
    hospital_entry = 6,
    resample = 7,
};

// Path prefix for ensemble-level draws (resampling), never a particle id.
inline constexpr std::uint64_t kEnsembleStreamTag = ~std::uint64_t{0};

/// One daily random-walk step of all three latent parameters.
DynamicParams evolve_params(RngStream& stream, const DynamicParams& dyn);

/// Secondary cases produced in one day by the current I_a occupancy;
/// asymptomatic activity is damped by k, both branches by r_t.
std::int64_t spawn_infections(RngStream& stream, std::int64_t n_asym, std::int64_t n_sym,
                              const DynamicParams& dyn, const FixedParams& fixed);

/// Advances a particle by one day: parameter walk, infection production,
/// queue advance with all compartment transitions.  When `forced` is given
/// the parameter walk is skipped and the particle uses those values
/// (reference runs, twin-data generation).
void step_particle(Particle& particle, std::int64_t day, const FixedParams& fixed,
                   std::uint64_t master_seed, const DynamicParams* forced = nullptr);

/// Effective reproduction number implied by the current contact rate.
double compute_rt(const DynamicParams& dyn, const FixedParams& fixed);

} // namespace pfepi

#endif
