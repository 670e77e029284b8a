#include "lagrmc/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "lagrmc/drift.hpp"
#include "lagrmc/errors.hpp"
#include "lagrmc/mollifier.hpp"
#include "lagrmc/parallel.hpp"
#include "lagrmc/rng.hpp"

namespace lagrmc {

namespace {

// Particles below this count are cheaper to sum naively than to bucket.
constexpr std::size_t kGridThreshold = 256;

// How far outside the domain a post-transport point may legally sit before
// it is treated as an engine bug rather than grazing round-off. Grazing
// continuations (tangential hits) drift off a curved wall quadratically in
// the remaining budget, so the repair band is much wider than tol_boundary
// but still far below any physical scale.
double repair_band(const DomainGeometry& dom) { return 1e-6 * dom.scale(); }

// The specular velocity jump -2 (u.n) n. Shared by the stepping loop and the
// log replay so both run the exact same arithmetic (bitwise).
inline void specular_jump(const double* u, const double* n, int d, double* jump) {
    double s = 0.0;
    for (int j = 0; j < d; ++j) s += u[j] * n[j];
    for (int j = 0; j < d; ++j) jump[j] = -2.0 * s * n[j];
}

} // namespace

std::size_t SimConfig::n_steps() const {
    // ceil(T/dt) with a one-ulp-scale guard so exact multiples do not gain a
    // spurious extra step.
    const double raw = T / dt;
    const auto steps = static_cast<std::int64_t>(std::ceil(raw - 1e-9));
    return steps < 1 ? 1 : static_cast<std::size_t>(steps);
}

ParticleState SystemState::particle(std::size_t i) const {
    ParticleState p;
    for (int j = 0; j < d; ++j) {
        p.x[j] = x[i * d + j];
        p.u[j] = u[i * d + j];
        p.k[j] = k[i * d + j];
    }
    p.jumps = jumps[i];
    return p;
}

void EventLog::append(double time, std::uint64_t pid, const double* hit_p, const double* um,
                      const double* up) {
    t.push_back(time);
    id.push_back(pid);
    hit.insert(hit.end(), hit_p, hit_p + d);
    u_minus.insert(u_minus.end(), um, um + d);
    u_plus.insert(u_plus.end(), up, up + d);
}

void EventLog::append_all(const EventLog& other) {
    t.insert(t.end(), other.t.begin(), other.t.end());
    id.insert(id.end(), other.id.begin(), other.id.end());
    hit.insert(hit.end(), other.hit.begin(), other.hit.end());
    u_minus.insert(u_minus.end(), other.u_minus.begin(), other.u_minus.end());
    u_plus.insert(u_plus.end(), other.u_plus.begin(), other.u_plus.end());
}

BoundaryEvent get_event(const EventLog& log, std::size_t row) {
    BoundaryEvent e;
    e.t = log.t[row];
    e.id = log.id[row];
    for (int j = 0; j < log.d; ++j) {
        e.hit[j] = log.hit[row * log.d + j];
        e.u_minus[j] = log.u_minus[row * log.d + j];
        e.u_plus[j] = log.u_plus[row * log.d + j];
    }
    return e;
}

SystemState sample_initial(const InitialLawSpec& law, const DomainGeometry& dom,
                           std::size_t N, std::uint64_t seed) {
    const int d = dom.dim();
    if (law.beta_star < 0.0) throw Error("sample_initial: beta_star must be >= 0");

    const double inr = dom.inradius();
    if (law.beta_star > inr)
        throw InfeasibleMargin("sample_initial: margin " + std::to_string(law.beta_star) +
                               " exceeds the inradius " + std::to_string(inr));
    if (law.pos_kind == InitialLawSpec::PosKind::UniformMargin && law.beta_star >= inr)
        throw InfeasibleMargin("sample_initial: uniform law needs margin < inradius");
    if (law.pos_kind == InitialLawSpec::PosKind::Point) {
        if (law.pos_point.size() != static_cast<std::size_t>(d))
            throw Error("sample_initial: point position has wrong dimension");
        if (dom.signed_distance(law.pos_point) < law.beta_star)
            throw InfeasibleMargin("sample_initial: point position is shallower than beta_star");
    }
    if (law.vel_kind == InitialLawSpec::VelKind::Point &&
        law.vel_point.size() != static_cast<std::size_t>(d))
        throw Error("sample_initial: point velocity has wrong dimension");
    if (law.vel_kind == InitialLawSpec::VelKind::Gaussian && !law.vel_mean.empty() &&
        law.vel_mean.size() != static_cast<std::size_t>(d))
        throw Error("sample_initial: velocity mean has wrong dimension");

    SystemState st;
    st.d = d;
    st.N = N;
    st.x.resize(N * d);
    st.u.resize(N * d);
    st.k.assign(N * d, 0.0);
    st.jumps.assign(N, 0);
    st.rng_state.resize(N);

    double lo[kMaxDim], hi[kMaxDim];
    if (law.pos_kind == InitialLawSpec::PosKind::UniformMargin)
        dom.bounding_box(std::span<double>(lo, d), std::span<double>(hi, d));

    for (std::size_t i = 0; i < N; ++i) {
        RngStream g(seed, i);
        double* xi = st.x.data() + i * d;
        if (law.pos_kind == InitialLawSpec::PosKind::Point) {
            std::copy(law.pos_point.begin(), law.pos_point.end(), xi);
        } else {
            for (;;) {
                for (int j = 0; j < d; ++j) xi[j] = g.uniform_in(lo[j], hi[j]);
                if (dom.signed_distance(std::span<const double>(xi, d)) >= law.beta_star) break;
            }
        }
        double* ui = st.u.data() + i * d;
        if (law.vel_kind == InitialLawSpec::VelKind::Point) {
            std::copy(law.vel_point.begin(), law.vel_point.end(), ui);
        } else {
            g.normals(ui, d);
            for (int j = 0; j < d; ++j) {
                const double m = law.vel_mean.empty() ? 0.0 : law.vel_mean[j];
                ui[j] = m + law.vel_stddev * ui[j];
            }
        }
        st.rng_state[i] = g.raw_state();
    }
    return st;
}

void step(SystemState& st, const SimConfig& cfg, EventLog* log, double* drift_sum,
          double* noise_sum) {
    const int d = st.d;
    const std::size_t N = st.N;
    const DomainGeometry& dom = cfg.domain;
    const double dt = cfg.dt;
    const double sqrt_dt = std::sqrt(dt);
    const double t0 = st.t;

    // ---- Phase A: velocity kick from the frozen snapshot ----
    std::vector<double> drift;
    if (!cfg.kernel.is_zero()) {
        drift.resize(N * d);
        const EmpiricalSnapshot snap{d, N, std::span<const double>(st.x),
                                     std::span<const double>(st.u)};
        const MollifierSpec mol(cfg.epsilon, d);
        const DriftEvaluator ev(snap, mol, cfg.kernel, dom, N >= kGridThreshold);
        parallel_for_chunks(N, cfg.workers, [&](std::size_t lo_i, std::size_t hi_i, int) {
            for (std::size_t i = lo_i; i < hi_i; ++i)
                ev.eval(std::span<const double>(st.x.data() + i * d, d),
                        std::span<double>(drift.data() + i * d, d));
        });
    }
    const bool has_drift = !drift.empty();

    parallel_for_chunks(N, cfg.workers, [&](std::size_t lo_i, std::size_t hi_i, int) {
        double xi[kMaxDim];
        for (std::size_t i = lo_i; i < hi_i; ++i) {
            RngStream g = RngStream::from_raw_state(st.rng_state[i]);
            if (cfg.sigma > 0.0) g.normals(xi, d);
            for (int j = 0; j < d; ++j) {
                const std::size_t a = i * d + j;
                const double kick_drift = has_drift ? drift[a] * dt : 0.0;
                const double kick_noise = cfg.sigma > 0.0 ? sqrt_dt * xi[j] : 0.0;
                st.u[a] += kick_drift + cfg.sigma * kick_noise;
                if (drift_sum) drift_sum[a] += kick_drift;
                if (noise_sum) noise_sum[a] += kick_noise;
            }
            st.rng_state[i] = g.raw_state();
        }
    });

    // ---- Phase B: ballistic transport with exact reflections ----
    const int workers = cfg.workers < 1 ? 1 : cfg.workers;
    std::vector<EventLog> chunk_logs;
    if (log) {
        chunk_logs.resize(static_cast<std::size_t>(workers));
        for (auto& cl : chunk_logs) cl.d = d;
    }
    const double band = repair_band(dom);

    parallel_for_chunks(N, cfg.workers, [&](std::size_t lo_i, std::size_t hi_i, int chunk) {
        EventLog* clog = log ? &chunk_logs[static_cast<std::size_t>(chunk)] : nullptr;
        double n_buf[kMaxDim], um_buf[kMaxDim], jump[kMaxDim];
        for (std::size_t i = lo_i; i < hi_i; ++i) {
            double* xi = st.x.data() + i * d;
            double* ui = st.u.data() + i * d;
            double* ki = st.k.data() + i * d;
            double r = dt;
            int nrefl = 0;
            // A particle sitting on the wall whose kick just turned its
            // velocity outward reflects in place: the continuous dynamics
            // would cross within O(tol_boundary) time, and transporting it
            // outward instead would lose it.
            {
                const double sd0 = dom.signed_distance(std::span<const double>(xi, d));
                if (std::abs(sd0) <= dom.tol_boundary()) {
                    dom.outward_normal(std::span<const double>(xi, d),
                                       std::span<double>(n_buf, d));
                    double flux = 0.0;
                    for (int j = 0; j < d; ++j) flux += ui[j] * n_buf[j];
                    if (flux > 0.0) {
                        for (int j = 0; j < d; ++j) um_buf[j] = ui[j];
                        specular_jump(um_buf, n_buf, d, jump);
                        for (int j = 0; j < d; ++j) {
                            ui[j] += jump[j];
                            ki[j] += jump[j];
                        }
                        st.jumps[i] += 1;
                        ++nrefl;
                        if (clog) clog->append(t0, i, xi, um_buf, ui);
                    }
                }
            }
            while (r > 0.0) {
                const auto exit = dom.first_exit_time(std::span<const double>(xi, d),
                                                      std::span<const double>(ui, d), r);
                if (!exit) {
                    for (int j = 0; j < d; ++j) xi[j] += r * ui[j];
                    break;
                }
                // Advance to the wall and reflect.
                for (int j = 0; j < d; ++j) xi[j] = exit->hit[j];
                dom.outward_normal(std::span<const double>(xi, d), std::span<double>(n_buf, d));
                for (int j = 0; j < d; ++j) um_buf[j] = ui[j];
                specular_jump(um_buf, n_buf, d, jump);
                for (int j = 0; j < d; ++j) {
                    ui[j] += jump[j];
                    ki[j] += jump[j];
                }
                st.jumps[i] += 1;
                ++nrefl;
                if (clog) clog->append(t0 + (dt - r) + exit->t, i, xi, um_buf, ui);
                r -= exit->t;
                if (nrefl >= cfg.max_reflections_per_step) {
                    const double t_hit = t0 + dt - r;
                    throw ReflectionCapExceeded(
                        "particle " + std::to_string(i) + " exceeded " +
                            std::to_string(cfg.max_reflections_per_step) +
                            " reflections in one step at t=" + std::to_string(t_hit) +
                            "; reduce dt for this geometry",
                        i, t_hit);
                }
            }
            // Containment repair: grazing continuations may sit a hair
            // outside the closed domain; clamp within the band, fail beyond.
            const double sd = dom.signed_distance(std::span<const double>(xi, d));
            if (sd < 0.0) {
                if (sd < -band)
                    throw ContainmentViolation("particle " + std::to_string(i) +
                                               " left the domain by " + std::to_string(-sd) +
                                               " at t=" + std::to_string(t0 + dt));
                dom.project_into(std::span<double>(xi, d));
            }
        }
    });

    if (log)
        for (const auto& cl : chunk_logs) log->append_all(cl);

    st.step_index += 1;
    st.t = static_cast<double>(st.step_index) * dt;
}

RunRecord run(const SimConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw Error("run: dt must be positive");
    if (!(cfg.T >= cfg.dt)) throw Error("run: T must be at least dt");
    if (!(cfg.sigma >= 0.0)) throw Error("run: sigma must be >= 0");
    if (!(cfg.epsilon > 0.0)) throw Error("run: epsilon must be positive");
    if (cfg.N < 1) throw Error("run: N must be >= 1");
    if (cfg.d != cfg.domain.dim()) throw Error("run: dimension does not match the domain");

    RunRecord rec;
    rec.cfg = cfg;
    rec.final_state = sample_initial(cfg.initial, cfg.domain, cfg.N, cfg.seed);
    SystemState& st = rec.final_state;
    rec.events.d = cfg.d;

    const std::size_t steps = cfg.n_steps();

    // Checkpoint step indices: requested times rounded down to multiples of dt.
    std::vector<std::size_t> cp_steps;
    for (double tc : cfg.checkpoint_times) {
        if (tc < 0.0) continue;
        auto idx = static_cast<std::size_t>(std::floor(tc / cfg.dt + 1e-9));
        cp_steps.push_back(std::min(idx, steps));
    }
    std::sort(cp_steps.begin(), cp_steps.end());
    cp_steps.erase(std::unique(cp_steps.begin(), cp_steps.end()), cp_steps.end());

    if (cfg.record_events) {
        rec.has_increments = true;
        rec.u0 = st.u;
        rec.drift_sum.assign(cfg.N * cfg.d, 0.0);
        rec.noise_sum.assign(cfg.N * cfg.d, 0.0);
    }

    auto take_checkpoint = [&](std::size_t step_idx) {
        Checkpoint cp;
        cp.step_index = static_cast<std::int64_t>(step_idx);
        cp.t = static_cast<double>(step_idx) * cfg.dt;
        cp.x = st.x;
        cp.u = st.u;
        cp.k = st.k;
        cp.jumps = st.jumps;
        rec.checkpoints.push_back(std::move(cp));
    };

    std::size_t next_cp = 0;
    if (next_cp < cp_steps.size() && cp_steps[next_cp] == 0) {
        take_checkpoint(0);
        ++next_cp;
    }

    for (std::size_t s = 1; s <= steps; ++s) {
        step(st, cfg, cfg.record_events ? &rec.events : nullptr,
             rec.has_increments ? rec.drift_sum.data() : nullptr,
             rec.has_increments ? rec.noise_sum.data() : nullptr);
        if (next_cp < cp_steps.size() && cp_steps[next_cp] == s) {
            take_checkpoint(s);
            ++next_cp;
        }
    }
    return rec;
}

double pathwise_identity_check(const RunRecord& rec) {
    if (!rec.has_increments)
        throw MissingIncrements(
            "pathwise_identity_check: run must be executed with record_events");
    const SystemState& st = rec.final_state;
    double worst = 0.0;
    for (std::size_t a = 0; a < st.u.size(); ++a) {
        const double res = st.u[a] - rec.u0[a] - rec.drift_sum[a] -
                           rec.cfg.sigma * rec.noise_sum[a] - st.k[a];
        worst = std::max(worst, std::abs(res));
    }
    return worst;
}

std::vector<double> reconstruct_jump_sums(const EventLog& log, const DomainGeometry& dom,
                                          std::size_t N) {
    const int d = log.d;
    std::vector<double> sums(N * d, 0.0);
    double n_buf[kMaxDim], jump[kMaxDim];
    // The log is ordered by (step, id, within-step time); per particle that
    // is chronological, matching the accumulation order of k exactly.
    for (std::size_t row = 0; row < log.size(); ++row) {
        const double* hit = log.hit.data() + row * d;
        const double* um = log.u_minus.data() + row * d;
        dom.outward_normal(std::span<const double>(hit, d), std::span<double>(n_buf, d));
        specular_jump(um, n_buf, d, jump);
        double* s = sums.data() + log.id[row] * d;
        for (int j = 0; j < d; ++j) s[j] += jump[j];
    }
    return sums;
}

std::vector<std::size_t> jump_histogram(std::span<const std::int32_t> jumps,
                                        std::size_t max_bins) {
    std::vector<std::size_t> h(max_bins, 0);
    for (std::int32_t m : jumps) {
        const auto bin = std::min<std::size_t>(static_cast<std::size_t>(std::max(m, 0)),
                                               max_bins - 1);
        ++h[bin];
    }
    while (h.size() > 1 && h.back() == 0) h.pop_back();
    return h;
}

} // namespace lagrmc
