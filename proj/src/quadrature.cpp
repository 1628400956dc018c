#include "katufrac/quadrature.hpp"

#include <cmath>
#include <cstdlib>
#include <thread>

namespace katufrac {

namespace {

// Per-cell moments of the kernel against the two linear hat functions.
// With v = u_j - u (v1 = u_j - u_{i+1} <= v = u_j - u <= v0 = u_j - u_i):
//
//   left  (node i):   (1/du) Int_{v1}^{v0} (v - v1) v^(alpha-1) dv
//   right (node i+1): (1/du) Int_{v1}^{v0} (v0 - v) v^(alpha-1) dv
//
// Far from the singularity (v1 >> du) the closed forms lose precision to
// cancellation, so the integrals are evaluated there through the expansion
// of (1+s)^(alpha-1) with v = v1 (1+s), which has no cancellation:
//
//   Int_0^x s (1+s)^(alpha-1) ds       = Sum_k c_k x^(k+2) / (k+2)
//   Int_0^x (x-s) (1+s)^(alpha-1) ds   = Sum_k c_k x^(k+2) / ((k+1)(k+2))
//
// with c_k = binom(alpha-1, k) and x = du / v1.
struct CellMoments {
    double left;
    double right;
};

CellMoments cell_moments(double v1, double v0, double alpha) {
    const double du = v0 - v1;
    if (!(v0 > 1e-300) || !(du > 0.0)) return {0.0, 0.0};

    if (v1 <= 0.0) {
        // singular cell adjacent to the target node: exact antiderivatives
        const double p = std::pow(v0, alpha + 1.0);
        const double left = p / (alpha + 1.0) / du;
        const double right = p / (alpha * (alpha + 1.0)) / du;
        return {left, right};
    }

    const double x = du / v1;
    if (x > 0.25) {
        // wide cell relative to its distance from the singularity:
        // the closed forms are well conditioned here
        const double p0 = (std::pow(v0, alpha) - std::pow(v1, alpha)) / alpha;
        const double p1 = (std::pow(v0, alpha + 1.0) - std::pow(v1, alpha + 1.0)) / (alpha + 1.0);
        return {(p1 - v1 * p0) / du, (v0 * p0 - p1) / du};
    }

    double ck = 1.0;          // binom(alpha-1, 0)
    double xpow = x * x;      // x^(k+2)
    double s_left = 0.0, s_right = 0.0;
    for (int k = 0; k < 64; ++k) {
        const double kk = static_cast<double>(k);
        const double term_left = ck * xpow / (kk + 2.0);
        s_left += term_left;
        s_right += term_left / (kk + 1.0);
        if (std::fabs(term_left) < 1e-18 * s_left) break;
        ck *= (alpha - 1.0 - kk) / (kk + 1.0);
        xpow *= x;
    }
    const double scale = std::pow(v1, alpha + 1.0) / du;
    return {scale * s_left, scale * s_right};
}

void fill_row(const Grid& grid, std::size_t j, double alpha, std::vector<double>& w) {
    const auto& u = grid.u_nodes();
    w.assign(j + 1, 0.0);
    if (j == 0) {
        w.clear();
        return;
    }
    const double uj = u[j];
    const double scale =
        std::pow(grid.params().rho, -alpha) / std::tgamma(alpha);
    for (std::size_t i = 0; i < j; ++i) {
        const CellMoments m = cell_moments(uj - u[i + 1], uj - u[i], alpha);
        w[i] += scale * m.left;
        w[i + 1] += scale * m.right;
    }
}

}  // namespace

std::vector<double> singular_weights(const Grid& grid, std::size_t target_index,
                                     double alpha) {
    if (target_index > grid.n())
        throw ValidationError("target index beyond grid");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ValidationError("quadrature order must lie in (0,1)");
    std::vector<double> w;
    fill_row(grid, target_index, alpha, w);
    return w;
}

double integrate_singular(const RealFunction& h, const Grid& grid,
                          std::size_t target_index, double alpha, Warnings* warnings) {
    const std::vector<double> w = singular_weights(grid, target_index, alpha);
    const auto& t = grid.t_nodes();
    double acc = 0.0, comp = 0.0;  // Kahan
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double term = w[i] * h(t[i], warnings);
        const double y = term - comp;
        const double s = acc + y;
        comp = (s - acc) - y;
        acc = s;
    }
    return acc;
}

double integrate_full_kernel_b(const RealFunction& h, const Grid& grid, double alpha,
                               Warnings* warnings) {
    return integrate_singular(h, grid, grid.n(), alpha, warnings);
}

unsigned effective_thread_count() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("KATUFRAC_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1 && static_cast<unsigned>(cap) < hw) hw = static_cast<unsigned>(cap);
    }
    return hw;
}

WeightTable::WeightTable(const Grid& grid, double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ValidationError("quadrature order must lie in (0,1)");
    const std::size_t n = grid.n();
    rows_.resize(n + 1);
    const unsigned nthreads = effective_thread_count();
    if (nthreads <= 1 || n < 64) {
        for (std::size_t j = 0; j <= n; ++j) fill_row(grid, j, alpha, rows_[j]);
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(nthreads);
    for (unsigned w = 0; w < nthreads; ++w) {
        workers.emplace_back([this, &grid, alpha, n, w, nthreads] {
            for (std::size_t j = w; j <= n; j += nthreads)
                fill_row(grid, j, alpha, rows_[j]);
        });
    }
    for (auto& th : workers) th.join();
}

double WeightTable::apply(std::size_t j, const std::vector<double>& values) const {
    const auto& w = rows_[j];
    double acc = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double term = w[i] * values[i];
        const double y = term - comp;
        const double s = acc + y;
        comp = (s - acc) - y;
        acc = s;
    }
    return acc;
}

}  // namespace katufrac
