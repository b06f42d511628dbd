#include "pfepi/epimodel.hpp"

#include <cmath>

#include "pfepi/errors.hpp"

namespace pfepi {

FixedParams FixedParams::defaults()
{
    FixedParams f;
    f.p_as = 0.83;
    f.p_a_inf = 0.17;
    f.p_sh = 0.78;
    f.p_s_inf = 0.22;
    f.k = 0.58;
    f.t_e = 3;
    f.dist_t_a_inf = {{1, 2, 3, 4, 5, 6, 7, 8, 9},
                      {0.0, 0.0, 0.0, 0.0, 0.05, 0.2, 0.5, 0.2, 0.05}};
    f.dist_t_as = {{1, 2, 3, 4, 5, 6, 7, 8, 9},
                   {0.0, 0.3, 0.6, 0.05, 0.05, 0.0, 0.0, 0.0, 0.0}};
    f.dist_t_sh = {{1, 2, 3, 4, 5, 6, 7, 8, 9},
                   {0.0, 0.1, 0.2, 0.5, 0.15, 0.05, 0.0, 0.0, 0.0}};
    f.offspring = {0.5, 0.35, 0.12, 0.01, 0.01, 0.01};
    f.finalize();
    return f;
}

void FixedParams::finalize()
{
    if (std::abs(p_as + p_a_inf - 1.0) > 1e-12)
        throw ConfigError("fixed params: p_as + p_a_inf must equal 1");
    if (std::abs(p_sh + p_s_inf - 1.0) > 1e-12)
        throw ConfigError("fixed params: p_sh + p_s_inf must equal 1");
    for (double p : {p_as, p_a_inf, p_sh, p_s_inf})
        if (p < 0.0 || p > 1.0)
            throw ConfigError("fixed params: branch probability outside [0,1]");
    if (k < 0.0 || k > 1.0)
        throw ConfigError("fixed params: k outside [0,1]");
    if (t_e < 1 || t_e > kMaxExposedDays)
        throw ConfigError("fixed params: t_e outside [1," + std::to_string(kMaxExposedDays) + "]");

    dist_t_a_inf.validate();
    dist_t_as.validate();
    dist_t_sh.validate();
    for (const auto* d : {&dist_t_a_inf, &dist_t_as}) {
        if (d->max_value() > kMaxInfectiousDays)
            throw ConfigError("fixed params: I_a residence time exceeds queue capacity");
    }
    if (dist_t_sh.max_value() > kMaxPresymptomaticDays)
        throw ConfigError("fixed params: I_s residence time exceeds queue capacity");
    for (const auto* d : {&dist_t_a_inf, &dist_t_as, &dist_t_sh}) {
        if (d->values.size() > 16)
            throw ConfigError("fixed params: residence distribution support too large");
        for (std::int64_t v : d->values)
            if (v < 1)
                throw ConfigError("fixed params: residence times must be >= 1 day");
    }

    double sum = 0.0;
    e_sc = 0.0;
    for (std::size_t j = 0; j < offspring.size(); ++j) {
        if (offspring[j] < 0.0)
            throw ConfigError("fixed params: negative offspring probability");
        sum += offspring[j];
        e_sc += static_cast<double>(j) * offspring[j];
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw ConfigError("fixed params: offspring probabilities must sum to 1");

    mean_t_a_inf = dist_t_a_inf.mean();
    mean_t_as = dist_t_as.mean();

    if (static_cast<int>(std::ceil(kHospMeanMax)) > kMaxHospitalDays)
        throw ConfigError("fixed params: hospital residence exceeds queue capacity");
}

DynamicParams evolve_params(RngStream& stream, const DynamicParams& dyn)
{
    DynamicParams out;
    out.contact_rate =
        sample_truncated_normal(stream, dyn.contact_rate, kContactWalkSigma, kContactMin, kContactMax);
    out.p_hd =
        sample_truncated_normal(stream, dyn.p_hd, kDeathProbWalkSigma, kDeathProbMin, kDeathProbMax);
    out.mean_t_h = sample_truncated_normal(stream, dyn.mean_t_h, kHospMeanWalkSigma, kHospMeanMin,
                                           kHospMeanMax);
    return out;
}

namespace {

// Offspring produced by n agents whose per-day activity is scaled by
// `activity` (r_t, or k*r_t for asymptomatic agents): one multinomial over
// the damped offspring distribution, summed as total secondary cases.
std::int64_t offspring_total(RngStream& stream, std::int64_t n, double activity,
                             const std::array<double, 6>& base)
{
    if (n == 0)
        return 0;
    std::array<double, 6> probs;
    probs[0] = (1.0 - activity) + activity * base[0];
    for (std::size_t j = 1; j < 6; ++j)
        probs[j] = activity * base[j];
    std::array<std::int64_t, 6> counts{};
    sample_multinomial_into(stream, n, probs, counts);
    std::int64_t total = 0;
    for (std::size_t j = 1; j < 6; ++j)
        total += static_cast<std::int64_t>(j) * counts[j];
    return total;
}

template <std::size_t N>
std::int64_t shift_queue(std::array<std::int64_t, N>& q)
{
    const std::int64_t exits = q[0];
    for (std::size_t j = 0; j + 1 < N; ++j)
        q[j] = q[j + 1];
    q[N - 1] = 0;
    return exits;
}

// Draws residence times for a cohort of n agents as one multinomial over
// the duration distribution and deposits the counts into the target queue
// (value v days => slot v-1 after today's shift).
template <std::size_t N>
void enqueue_cohort(RngStream& stream, std::int64_t n, const DiscreteDistribution& dist,
                    std::array<std::int64_t, N>& queue)
{
    if (n == 0)
        return;
    std::array<std::int64_t, 16> counts{};
    const std::size_t m = dist.values.size();
    sample_multinomial_into(stream, n, dist.probabilities,
                            std::span<std::int64_t>(counts.data(), m));
    for (std::size_t i = 0; i < m; ++i)
        if (counts[i] > 0)
            queue[static_cast<std::size_t>(dist.values[i] - 1)] += counts[i];
}

// Two-point residence times around a fractional mean: the cohort multinomial
// over {floor, ceil} reduces to a single binomial on the ceil share.
template <std::size_t N>
void enqueue_cohort_two_point(RngStream& stream, std::int64_t n, double mean,
                              std::array<std::int64_t, N>& queue)
{
    if (n == 0)
        return;
    const double f = std::floor(mean);
    const auto lo = static_cast<std::size_t>(f);
    if (mean == f) {
        queue[lo - 1] += n;
        return;
    }
    const std::int64_t hi_count = sample_binomial(stream, n, mean - f);
    queue[lo] += hi_count; // ceil = lo+1 days => slot lo
    queue[lo - 1] += n - hi_count;
}

} // namespace

std::int64_t spawn_infections(RngStream& stream, std::int64_t n_asym, std::int64_t n_sym,
                              const DynamicParams& dyn, const FixedParams& fixed)
{
    std::int64_t total = 0;
    total += offspring_total(stream, n_asym, fixed.k * dyn.contact_rate, fixed.offspring);
    total += offspring_total(stream, n_sym, dyn.contact_rate, fixed.offspring);
    return total;
}

void step_particle(Particle& particle, std::int64_t day, const FixedParams& fixed,
                   std::uint64_t master_seed, const DynamicParams* forced)
{
    const auto d = static_cast<std::uint64_t>(day);
    CompartmentState& st = particle.state;

    // 1. Latent-parameter walk.
    if (forced != nullptr) {
        particle.dyn = *forced;
    } else {
        auto s = RngStream::derive(master_seed,
                                   {particle.rng_id, d, static_cast<std::uint64_t>(Draw::param_walk)});
        particle.dyn = evolve_params(s, particle.dyn);
    }
    PFEPI_CHECK(particle.dyn.contact_rate >= kContactMin && particle.dyn.contact_rate <= kContactMax,
                "contact rate left [0,1]");
    PFEPI_CHECK(particle.dyn.p_hd >= kDeathProbMin && particle.dyn.p_hd <= kDeathProbMax,
                "death probability left its bounds");
    PFEPI_CHECK(particle.dyn.mean_t_h >= kHospMeanMin && particle.dyn.mean_t_h <= kHospMeanMax,
                "hospital mean time left its bounds");

    // 2. Today's infections, from I_a occupancy before any departures.
    {
        auto s = RngStream::derive(master_seed,
                                   {particle.rng_id, d, static_cast<std::uint64_t>(Draw::infect)});
        const std::int64_t fresh =
            spawn_infections(s, st.ia_asym_total(), st.ia_sym_total(), particle.dyn, fixed);
        // The infection day counts as the first exposed day.
        st.e_queue[static_cast<std::size_t>(fixed.t_e - 1)] += fresh;
        st.infected_cum += fresh;
    }

    // 3. Advance all queues one day, then route the exiting cohorts.
    st.r_cum += shift_queue(st.h_to_r_queue);
    st.d_cum += shift_queue(st.h_to_d_queue);
    const std::int64_t is_exit = shift_queue(st.is_queue);
    const std::int64_t ia_sym_exit = shift_queue(st.ia_sym_queue);
    const std::int64_t ia_asym_exit = shift_queue(st.ia_asym_queue);
    const std::int64_t e_exit = shift_queue(st.e_queue);

    st.removed_asym_cum += ia_asym_exit;

    if (e_exit > 0) {
        auto s = RngStream::derive(
            master_seed, {particle.rng_id, d, static_cast<std::uint64_t>(Draw::exposed_exit)});
        const std::int64_t n_sym = sample_binomial(s, e_exit, fixed.p_as);
        enqueue_cohort(s, n_sym, fixed.dist_t_as, st.ia_sym_queue);
        enqueue_cohort(s, e_exit - n_sym, fixed.dist_t_a_inf, st.ia_asym_queue);
    }

    if (ia_sym_exit > 0) {
        auto s = RngStream::derive(
            master_seed, {particle.rng_id, d, static_cast<std::uint64_t>(Draw::presym_exit)});
        const std::int64_t to_h = sample_binomial(s, ia_sym_exit, fixed.p_sh);
        st.removed_selfq_cum += ia_sym_exit - to_h;
        enqueue_cohort(s, to_h, fixed.dist_t_sh, st.is_queue);
    }

    if (is_exit > 0) {
        // Fate and residence use the parameters of the entry day.
        auto s = RngStream::derive(
            master_seed, {particle.rng_id, d, static_cast<std::uint64_t>(Draw::hospital_entry)});
        const std::int64_t to_d = sample_binomial(s, is_exit, particle.dyn.p_hd);
        enqueue_cohort_two_point(s, to_d, particle.dyn.mean_t_h, st.h_to_d_queue);
        enqueue_cohort_two_point(s, is_exit - to_d, particle.dyn.mean_t_h, st.h_to_r_queue);
    }

    PFEPI_CHECK(st.conserves(), "compartment conservation");
}

double compute_rt(const DynamicParams& dyn, const FixedParams& fixed)
{
    return (fixed.k * fixed.p_a_inf * fixed.mean_t_a_inf + fixed.p_as * fixed.mean_t_as) *
           fixed.e_sc * dyn.contact_rate;
}

} // namespace pfepi
