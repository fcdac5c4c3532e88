#include "kms/particle.hpp"

#include <cmath>
#include <stdexcept>

#include "parallel.hpp"

namespace kms {

namespace {

double wrap_phase(double th) {
    th = std::fmod(th, two_pi);
    return th < 0.0 ? th + two_pi : th;
}

// Stream purposes keep initialization draws disjoint from dynamics noise.
constexpr std::uint64_t kPhaseDraw = 0xA001;
constexpr std::uint64_t kVelocityDraw = 0xA002;
constexpr std::uint64_t kFrequencyDraw = 0xA003;
constexpr std::uint64_t kStepBase = 0x100000;

}  // namespace

InitialSpec::Phase parse_phase_family(const std::string& name) {
    if (name == "uniform") return InitialSpec::Phase::uniform;
    if (name == "gaussian") return InitialSpec::Phase::gaussian;
    throw std::invalid_argument("unknown phase family: " + name);
}

InitialSpec::Velocity parse_velocity_family(const std::string& name) {
    if (name == "delta") return InitialSpec::Velocity::delta;
    if (name == "gaussian") return InitialSpec::Velocity::gaussian;
    throw std::invalid_argument("unknown velocity family: " + name);
}

InitialSpec::Frequency parse_frequency_family(const std::string& name) {
    if (name == "delta") return InitialSpec::Frequency::delta;
    if (name == "uniform") return InitialSpec::Frequency::uniform;
    if (name == "gaussian") return InitialSpec::Frequency::gaussian;
    throw std::invalid_argument("unknown frequency family: " + name);
}

ParticleEnsemble sample_initial(const InitialSpec& spec, std::size_t n, std::uint64_t seed) {
    ParticleEnsemble e;
    e.theta.resize(n);
    e.w.resize(n);
    e.nu.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        switch (spec.phase) {
            case InitialSpec::Phase::uniform:
                e.theta[i] = two_pi * rng::uniform01(seed, i, kPhaseDraw);
                break;
            case InitialSpec::Phase::gaussian:
                e.theta[i] = wrap_phase(spec.phase_mean +
                                        spec.phase_stddev *
                                            rng::normal_pair(seed, i, kPhaseDraw).z0);
                break;
        }
        switch (spec.velocity) {
            case InitialSpec::Velocity::delta:
                e.w[i] = spec.w_mean;
                break;
            case InitialSpec::Velocity::gaussian:
                e.w[i] = spec.w_mean +
                         spec.w_stddev * rng::normal_pair(seed, i, kVelocityDraw).z0;
                break;
        }
        switch (spec.frequency) {
            case InitialSpec::Frequency::delta:
                e.nu[i] = spec.nu_a;
                break;
            case InitialSpec::Frequency::uniform:
                e.nu[i] = spec.nu_a +
                          (spec.nu_b - spec.nu_a) * rng::uniform01(seed, i, kFrequencyDraw);
                break;
            case InitialSpec::Frequency::gaussian:
                e.nu[i] = spec.nu_a + spec.nu_b * rng::normal_pair(seed, i, kFrequencyDraw).z0;
                break;
        }
    }
    return e;
}

std::vector<double> sync_force(const ParticleEnsemble& e, double K) {
    const std::size_t n = e.size();
    double s = 0.0, c = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s += std::sin(e.theta[i]);
        c += std::cos(e.theta[i]);
    }
    std::vector<double> force(n);
    const double kn = K / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
        force[i] = kn * (s * std::cos(e.theta[i]) - c * std::sin(e.theta[i]));
    return force;
}

void em_step(ParticleEnsemble& e, double dt, const PhysicalParams& p, std::uint64_t seed,
             std::uint64_t step_index, int threads) {
    validate(p);
    if (!(dt > 0.0)) throw std::invalid_argument("em_step: dt must be positive");
    if (dt > p.m / 10.0)
        throw std::invalid_argument("em_step: dt exceeds the stiffness guard m/10");
    const std::size_t n = e.size();
    const auto force = sync_force(e, p.K);
    const double amp = std::sqrt(2.0 * p.sigma) / p.m * std::sqrt(dt);
    const std::uint64_t ctr = kStepBase + step_index;
    detail::parallel_for(n, threads, [&](std::size_t b, std::size_t end) {
        for (std::size_t i = b; i < end; ++i) {
            e.theta[i] = wrap_phase(e.theta[i] + e.w[i] * dt);
            const double drift = (e.nu[i] - e.w[i] + force[i]) / p.m;
            e.w[i] += dt * drift + amp * rng::normal_pair(seed, i, ctr).z0;
        }
    });
}

EmpiricalKinetic empirical_kinetic(const ParticleEnsemble& e, const PhaseGrid& th,
                                   const VelocityGrid& wg, const FrequencyQuadrature& nu) {
    EmpiricalKinetic out{KineticField(th, wg, nu), {}, {}, 0};
    out.occupied.assign(nu.size(), 0);
    out.counts.assign(nu.size(), 0);

    std::vector<std::size_t> hits(nu.size() * th.n * wg.n, 0);
    for (std::size_t k = 0; k < e.size(); ++k) {
        std::size_t q = 0;
        double best = std::abs(e.nu[k] - nu.nodes[0]);
        for (std::size_t c = 1; c < nu.size(); ++c) {
            const double d = std::abs(e.nu[k] - nu.nodes[c]);
            if (d < best) {
                best = d;
                q = c;
            }
        }
        const double rel = (e.w[k] - wg.w_min) / wg.dw;
        const auto j_signed = static_cast<std::ptrdiff_t>(std::lround(rel));
        if (j_signed < 0 || j_signed >= static_cast<std::ptrdiff_t>(wg.n)) {
            ++out.discarded;
            continue;
        }
        const std::size_t i = th.wrap(static_cast<std::ptrdiff_t>(
            std::floor(wrap_phase(e.theta[k]) / th.dtheta)));
        ++hits[out.f.index(q, i, static_cast<std::size_t>(j_signed))];
        ++out.counts[q];
    }

    for (std::size_t q = 0; q < nu.size(); ++q) {
        if (out.counts[q] == 0) continue;
        out.occupied[q] = 1;
        const double norm =
            1.0 / (static_cast<double>(out.counts[q]) * th.dtheta * wg.dw);
        for (std::size_t i = 0; i < th.n; ++i)
            for (std::size_t j = 0; j < wg.n; ++j)
                out.f.at(q, i, j) = static_cast<double>(hits[out.f.index(q, i, j)]) * norm;
    }
    return out;
}

OrderStats empirical_order_stats(const ParticleEnsemble& e) {
    OrderStats s;
    const std::size_t n = e.size();
    if (n == 0) return s;
    double sr = 0.0, si = 0.0, mw = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sr += std::cos(e.theta[i]);
        si += std::sin(e.theta[i]);
        mw += e.w[i];
    }
    sr /= static_cast<double>(n);
    si /= static_cast<double>(n);
    mw /= static_cast<double>(n);
    s.R = std::hypot(sr, si);
    s.psi = std::atan2(si, sr);
    s.mean_w = mw;
    double vw = 0.0;
    for (std::size_t i = 0; i < n; ++i) vw += (e.w[i] - mw) * (e.w[i] - mw);
    s.var_w = vw / static_cast<double>(n);
    return s;
}

}  // namespace kms
