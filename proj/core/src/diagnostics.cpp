#include "lagrmc/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lagrmc/errors.hpp"
#include "lagrmc/rng.hpp"

namespace lagrmc {

WeightFunction::WeightFunction(double alpha, int d) : alpha_(alpha), d_(d) {
    if (!(alpha > d + 3))
        throw Error("weight function needs alpha > d + 3 (got alpha=" + std::to_string(alpha) +
                    ", d=" + std::to_string(d) + ")");
}

double WeightFunction::operator()(std::span<const double> u) const {
    double s = 0.0;
    for (int j = 0; j < d_; ++j) s += u[j] * u[j];
    return std::pow(1.0 + s, 0.5 * alpha_);
}

// ---- sliced W1 ----

double w1_1d(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw EmptySample("w1_1d: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());

    // Integrate |Qa - Qb| over (0,1). Both quantile functions are constant
    // between breakpoints i/nA and j/nB; walk the merged breakpoints with
    // integer positions on the common denominator nA*nB.
    const std::uint64_t nA = a.size(), nB = b.size();
    const double denom = static_cast<double>(nA) * static_cast<double>(nB);
    std::uint64_t pos = 0; // current position * nA*nB
    std::size_t i = 0, j = 0;
    double acc = 0.0;
    while (i < nA && j < nB) {
        const std::uint64_t next_a = (i + 1) * nB;
        const std::uint64_t next_b = (j + 1) * nA;
        const std::uint64_t next = std::min(next_a, next_b);
        acc += static_cast<double>(next - pos) * std::abs(a[i] - b[j]);
        pos = next;
        if (next == next_a) ++i;
        if (next == next_b) ++j;
    }
    return acc / denom;
}

namespace {

double sliced_w1_impl(std::span<const double> A, std::size_t nA, std::span<const double> B,
                      std::size_t nB, int m, std::span<const double> dirs, int n_proj) {
    if (nA == 0 || nB == 0) throw EmptySample("sliced_w1: empty sample");
    if (n_proj < 1) throw Error("sliced_w1: need at least one projection");

    std::vector<double> pa(nA), pb(nB);
    double acc = 0.0;
    for (int p = 0; p < n_proj; ++p) {
        const double* th = dirs.data() + static_cast<std::size_t>(p) * m;
        for (std::size_t i = 0; i < nA; ++i) {
            double s = 0.0;
            for (int jj = 0; jj < m; ++jj) s += th[jj] * A[i * m + jj];
            pa[i] = s;
        }
        for (std::size_t i = 0; i < nB; ++i) {
            double s = 0.0;
            for (int jj = 0; jj < m; ++jj) s += th[jj] * B[i * m + jj];
            pb[i] = s;
        }
        acc += w1_1d(pa, pb);
    }
    return acc / n_proj;
}

} // namespace

double sliced_w1(std::span<const double> A, std::size_t nA, std::span<const double> B,
                 std::size_t nB, int m, int n_proj, std::uint64_t seed) {
    // Uniform directions: normalized Gaussian vectors from a dedicated stream.
    std::vector<double> dirs(static_cast<std::size_t>(n_proj) * m);
    RngStream g(seed, 0x511CEDULL);
    for (int p = 0; p < n_proj; ++p) {
        double* th = dirs.data() + static_cast<std::size_t>(p) * m;
        double norm = 0.0;
        do {
            g.normals(th, m);
            norm = 0.0;
            for (int jj = 0; jj < m; ++jj) norm += th[jj] * th[jj];
        } while (norm == 0.0);
        norm = std::sqrt(norm);
        for (int jj = 0; jj < m; ++jj) th[jj] /= norm;
    }
    return sliced_w1_impl(A, nA, B, nB, m, dirs, n_proj);
}

double sliced_w1_with_directions(std::span<const double> A, std::size_t nA,
                                 std::span<const double> B, std::size_t nB, int m,
                                 std::span<const double> dirs, int n_proj) {
    return sliced_w1_impl(A, nA, B, nB, m, dirs, n_proj);
}

// ---- wall flux ----

ShellEstimate mean_no_permeability(std::span<const double> x, std::span<const double> u,
                                   std::size_t N, int d, const DomainGeometry& dom,
                                   double delta) {
    if (!(delta > 0.0)) throw Error("mean_no_permeability: delta must be positive");
    ShellEstimate out;
    out.delta = delta;

    double pi_buf[kMaxDim], n_buf[kMaxDim];
    double sum = 0.0, sum_sq = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < N; ++i) {
        const double* xi = x.data() + i * d;
        if (dom.signed_distance(std::span<const double>(xi, d)) >= delta) continue;
        dom.project_to_boundary(std::span<const double>(xi, d), std::span<double>(pi_buf, d));
        // Normal at the projected point. For the ball this is the radial
        // direction of x itself; computing it at the projection keeps the
        // same code path for every domain.
        dom.outward_normal(std::span<const double>(pi_buf, d), std::span<double>(n_buf, d));
        double flux = 0.0;
        for (int j = 0; j < d; ++j) flux += u[i * d + j] * n_buf[j];
        sum += flux;
        sum_sq += flux * flux;
        ++count;
    }

    out.count = count;
    if (count == 0) return out; // undefined
    out.defined = true;
    out.estimate = sum / static_cast<double>(count);
    if (count > 1) {
        const double var =
            (sum_sq - sum * sum / static_cast<double>(count)) / static_cast<double>(count - 1);
        out.std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(count));
    }
    return out;
}

double predicted_hit_rate(int d, double R, double sigma, double s0, double T) {
    double integral;
    if (sigma == 0.0) {
        integral = s0 * T;
    } else {
        const double s2 = sigma * sigma;
        integral = (2.0 / (3.0 * s2)) * (std::pow(s0 * s0 + s2 * T, 1.5) - s0 * s0 * s0);
    }
    return (static_cast<double>(d) / R) * integral / std::sqrt(2.0 * std::numbers::pi);
}

BoundaryHitRate boundary_hit_rate(const EventLog& events, const SimConfig& cfg) {
    if (!cfg.kernel.is_zero())
        throw WrongRegime("boundary_hit_rate: prediction requires a zero kernel");
    if (cfg.domain.kind() != DomainKind::Ball)
        throw WrongRegime("boundary_hit_rate: prediction requires a ball domain");
    if (cfg.initial.pos_kind != InitialLawSpec::PosKind::UniformMargin ||
        cfg.initial.beta_star != 0.0)
        throw WrongRegime("boundary_hit_rate: prediction requires uniform positions over the ball");
    if (cfg.initial.vel_kind != InitialLawSpec::VelKind::Gaussian)
        throw WrongRegime("boundary_hit_rate: prediction requires Gaussian velocities");
    for (double mj : cfg.initial.vel_mean)
        if (mj != 0.0)
            throw WrongRegime("boundary_hit_rate: prediction requires centered velocities");

    BoundaryHitRate out;
    out.total_events = events.size();

    std::vector<double> counts(cfg.N, 0.0);
    for (std::size_t row = 0; row < events.size(); ++row) counts[events.id[row]] += 1.0;

    double sum = 0.0, sum_sq = 0.0;
    for (double c : counts) {
        sum += c;
        sum_sq += c * c;
    }
    const auto n = static_cast<double>(cfg.N);
    out.empirical = sum / n;
    const double var = cfg.N > 1 ? (sum_sq - sum * sum / n) / (n - 1.0) : 0.0;
    out.std_error = std::sqrt(std::max(var, 0.0) / n);

    const double horizon = static_cast<double>(cfg.n_steps()) * cfg.dt;
    out.predicted = predicted_hit_rate(cfg.d, cfg.domain.radius(), cfg.sigma,
                                       cfg.initial.vel_stddev, horizon);
    out.z_score = out.std_error > 0.0 ? (out.empirical - out.predicted) / out.std_error : 0.0;
    return out;
}

// ---- KDE ----

KdeDensity::KdeDensity(std::span<const double> pts, std::size_t n, int m,
                       std::vector<double> bandwidths)
    : pts_(pts.begin(), pts.end()), n_(n), m_(m), bw_(std::move(bandwidths)) {
    if (n == 0) throw EmptySample("kde_density: empty sample");
    if (bw_.size() != static_cast<std::size_t>(m)) throw Error("kde_density: bandwidth dim");
    inv2h2_.resize(m_);
    norm_ = 1.0 / static_cast<double>(n_);
    for (int j = 0; j < m_; ++j) {
        if (!(bw_[j] > 0.0)) throw Error("kde_density: bandwidths must be positive");
        inv2h2_[j] = 1.0 / (2.0 * bw_[j] * bw_[j]);
        norm_ /= bw_[j] * std::sqrt(2.0 * std::numbers::pi);
    }
}

double KdeDensity::operator()(std::span<const double> q) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        const double* y = pts_.data() + i * m_;
        double e = 0.0;
        for (int j = 0; j < m_; ++j) {
            const double t = q[j] - y[j];
            e += t * t * inv2h2_[j];
        }
        acc += std::exp(-e);
    }
    return acc * norm_;
}

std::vector<double> KdeDensity::silverman_bandwidths(std::span<const double> pts, std::size_t n,
                                                     int m) {
    if (n < 2) throw EmptySample("silverman_bandwidths: need at least two points");
    std::vector<double> h(m);
    const double factor =
        std::pow(4.0 / ((m + 2.0) * static_cast<double>(n)), 1.0 / (m + 4.0));
    for (int j = 0; j < m; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += pts[i * m + j];
        mean /= static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double t = pts[i * m + j] - mean;
            ss += t * t;
        }
        const double sd = std::sqrt(ss / static_cast<double>(n - 1));
        h[j] = sd > 0.0 ? sd * factor : 1e-3; // degenerate marginal: tiny fixed width
    }
    return h;
}

KdeDensity kde_density(std::span<const double> pts, std::size_t n, int m,
                       std::vector<double> bandwidths) {
    return KdeDensity(pts, n, m, std::move(bandwidths));
}

std::size_t GridSpec::total_nodes() const {
    std::size_t t = 1;
    for (long nj : n) t *= static_cast<std::size_t>(nj);
    return t;
}

double GridSpec::cell_volume() const {
    double v = 1.0;
    for (int j = 0; j < m; ++j) v *= (hi[j] - lo[j]) / static_cast<double>(n[j] - 1);
    return v;
}

std::vector<double> kde_on_grid(const KdeDensity& f, const GridSpec& grid) {
    const int m = grid.m;
    if (m != f.dim()) throw Error("kde_on_grid: dimension mismatch");
    for (int j = 0; j < m; ++j)
        if (grid.n[j] < 2) throw Error("kde_on_grid: need >= 2 nodes per dimension");
    const std::size_t total = grid.total_nodes();
    if (total > 1000000) throw Error("kde_on_grid: more than 1e6 nodes");

    // Node coordinates per dimension.
    std::vector<std::vector<double>> axes(m);
    for (int j = 0; j < m; ++j) {
        axes[j].resize(grid.n[j]);
        const double step = (grid.hi[j] - grid.lo[j]) / static_cast<double>(grid.n[j] - 1);
        for (long a = 0; a < grid.n[j]; ++a) axes[j][a] = grid.lo[j] + step * a;
    }

    // The product kernel factorizes: per sample, build one Gaussian weight
    // vector per dimension, then accumulate their tensor product. This turns
    // total*n*m exp calls into n*(sum of axis lengths) exps plus fused
    // multiply-adds, which is what makes grid studies over many runs cheap.
    // Values are emitted in lexicographic node order, last dimension fastest.
    std::vector<double> out(total, 0.0);
    const auto& bw = f.bandwidths();
    std::vector<double> inv2h2(m);
    double norm = 1.0 / static_cast<double>(f.count());
    for (int j = 0; j < m; ++j) {
        inv2h2[j] = 1.0 / (2.0 * bw[j] * bw[j]);
        norm /= bw[j] * std::sqrt(2.0 * std::numbers::pi);
    }

    std::vector<std::vector<double>> w(m);
    for (int j = 0; j < m; ++j) w[j].resize(static_cast<std::size_t>(grid.n[j]));

    const std::span<const double> pts = f.points();
    const std::size_t n = f.count();
    std::vector<long> idx(m);
    for (std::size_t i = 0; i < n; ++i) {
        const double* y = pts.data() + i * m;
        for (int j = 0; j < m; ++j) {
            const auto& ax = axes[j];
            auto& wj = w[j];
            for (std::size_t a = 0; a < ax.size(); ++a) {
                const double t = ax[a] - y[j];
                wj[a] = std::exp(-t * t * inv2h2[j]);
            }
        }
        if (m == 1) {
            for (std::size_t a = 0; a < w[0].size(); ++a) out[a] += w[0][a];
        } else if (m == 2) {
            std::size_t node = 0;
            for (double wa : w[0])
                for (double wb : w[1]) out[node++] += wa * wb;
        } else {
            std::fill(idx.begin(), idx.end(), 0L);
            for (std::size_t node = 0; node < total; ++node) {
                double prod = 1.0;
                for (int j = 0; j < m; ++j) prod *= w[j][static_cast<std::size_t>(idx[j])];
                out[node] += prod;
                int j = m - 1;
                while (j >= 0 && ++idx[j] == grid.n[j]) {
                    idx[j] = 0;
                    --j;
                }
            }
        }
    }
    for (double& v : out) v *= norm;
    return out;
}

double l1_grid_distance(std::span<const double> a, std::span<const double> b,
                        double cell_volume) {
    if (a.size() != b.size()) throw Error("l1_grid_distance: table size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s * cell_volume;
}

// ---- envelope monitoring ----

EnvelopeReport maxwellian_envelope_check(std::span<const double> samples, double t,
                                         double sigma, double mean0, double s0, int n_bins,
                                         std::size_t min_count) {
    EnvelopeReport rep;
    if (samples.empty() || n_bins < 3) return rep;

    const auto [mn_it, mx_it] = std::minmax_element(samples.begin(), samples.end());
    double lo = *mn_it, hi = *mx_it;
    if (!(hi > lo)) return rep;
    const double width = (hi - lo) / n_bins;

    std::vector<std::size_t> counts(n_bins, 0);
    for (double v : samples) {
        auto b = static_cast<long>((v - lo) / width);
        b = std::clamp(b, 0L, static_cast<long>(n_bins) - 1);
        ++counts[static_cast<std::size_t>(b)];
    }

    // Reference: the Gaussian-convolution law N(mean0, s0^2 + sigma^2 t).
    const double var_ref = s0 * s0 + sigma * sigma * t;
    const double sd_ref = std::sqrt(var_ref);
    const auto n = static_cast<double>(samples.size());

    std::vector<double> ylog, zlog, noise;
    for (int b = 0; b < n_bins; ++b) {
        if (counts[b] < min_count) continue;
        const double center = lo + width * (b + 0.5);
        const double fhat = static_cast<double>(counts[b]) / (n * width);
        const double zc = (center - mean0) / sd_ref;
        const double gref =
            std::exp(-0.5 * zc * zc) / (sd_ref * std::sqrt(2.0 * std::numbers::pi));
        ylog.push_back(std::log(fhat));
        zlog.push_back(std::log(gref));
        noise.push_back(1.0 / std::sqrt(static_cast<double>(counts[b])));
    }
    rep.bins_used = ylog.size();
    if (ylog.size() < 3) return rep;

    // Least-squares fit y = c + nu z.
    const auto k = static_cast<double>(ylog.size());
    double sy = 0.0, sz = 0.0, szz = 0.0, szy = 0.0;
    for (std::size_t i = 0; i < ylog.size(); ++i) {
        sy += ylog[i];
        sz += zlog[i];
        szz += zlog[i] * zlog[i];
        szy += zlog[i] * ylog[i];
    }
    const double denom = k * szz - sz * sz;
    const double nu = denom != 0.0 ? (k * szy - sz * sy) / denom : 0.0;
    const double c = (sy - nu * sz) / k;
    rep.nu_hat = nu;
    rep.a_hat = t > 0.0 ? c / t : c;

    double worst_hi = -1e300, worst_lo = 1e300;
    bool up = true, down = true;
    for (std::size_t i = 0; i < ylog.size(); ++i) {
        const double res = ylog[i] - (c + nu * zlog[i]);
        worst_hi = std::max(worst_hi, res);
        worst_lo = std::min(worst_lo, res);
        const double headroom = 3.0 * noise[i] + 1e-6;
        if (res > headroom) up = false;
        if (res < -headroom) down = false;
    }
    rep.max_log_residual = worst_hi;
    rep.min_log_residual = worst_lo;
    rep.upper_dominated = up;
    rep.lower_dominated = down;
    return rep;
}

// ---- chaoticity ----

PairCovariance chaoticity_pair_covariance(std::span<const double> f) {
    PairCovariance out;
    const std::size_t n = f.size();
    if (n < 2) throw EmptySample("chaoticity_pair_covariance: need at least two values");

    // Shift by f[0]: covariance is shift-invariant, and a constant functional
    // then yields exactly zero instead of rounding residue.
    const double c = f[0];
    const std::size_t m = n / 2;
    double mean_all = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean_all += f[i] - c;
    mean_all /= static_cast<double>(n);

    double sp = 0.0, spp = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const double p = (f[2 * j] - c) * (f[2 * j + 1] - c);
        sp += p;
        spp += p * p;
    }
    const double mean_p = sp / static_cast<double>(m);
    out.n_pairs = m;
    out.cov = mean_p - mean_all * mean_all;
    if (m > 1) {
        const double var_p =
            (spp - sp * sp / static_cast<double>(m)) / static_cast<double>(m - 1);
        out.se = std::sqrt(std::max(var_p, 0.0) / static_cast<double>(m));
    }
    return out;
}

std::vector<double> functional_tanh_u1(const SystemState& st) {
    std::vector<double> f(st.N);
    for (std::size_t i = 0; i < st.N; ++i) f[i] = std::tanh(st.u[i * st.d]);
    return f;
}

std::vector<double> functional_capped_jumps(const SystemState& st, int cap) {
    std::vector<double> f(st.N);
    for (std::size_t i = 0; i < st.N; ++i)
        f[i] = static_cast<double>(std::min(st.jumps[i], cap));
    return f;
}

} // namespace lagrmc
