#include "folpsi/bisubmersion.hpp"

#include "folpsi/error.hpp"

#include <cmath>
#include <numbers>

namespace folpsi {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using State = std::vector<double>;

State frozen_field(const FoliationModule& F, std::span<const double> xi, const State& y) {
    State v(F.dim(), 0.0);
    for (int k = 0; k < F.rank(); ++k) {
        if (xi[k] == 0.0) continue;
        auto X = F.generators[k].eval(y);
        for (int i = 0; i < F.dim(); ++i) v[i] += xi[k] * X[i];
    }
    return v;
}

State axpy(const State& y, double h, const State& k) {
    State out(y);
    for (std::size_t i = 0; i < y.size(); ++i) out[i] += h * k[i];
    return out;
}

void check_args(const IdentityBisubmersion& B, std::span<const double> y, std::span<const double> xi) {
    const FoliationModule& F = *B.module;
    if (static_cast<int>(y.size()) != F.dim()) throw InputError("point has wrong dimension");
    if (static_cast<int>(xi.size()) != F.rank()) throw InputError("xi must have one entry per generator");
    if (!F.domain.contains(y)) throw InputError("point outside the domain");
    double r2 = 0.0;
    for (double v : xi) r2 += v * v;
    if (std::sqrt(r2) > B.radius * (1 + 1e-12))
        throw InputError("|xi| = " + std::to_string(std::sqrt(r2)) + " exceeds the neighborhood radius " +
                         std::to_string(B.radius));
}

std::vector<State> integrate(const IdentityBisubmersion& B, std::span<const double> y0, std::span<const double> xi,
                             int n_steps, bool keep_path) {
    const FoliationModule& F = *B.module;
    std::vector<State> path;
    State y(y0.begin(), y0.end());
    if (keep_path) path.push_back(y);
    bool zero = true;
    for (double v : xi) zero = zero && v == 0.0;
    if (zero) {
        if (keep_path) path.assign(n_steps + 1, y);
        else path.push_back(y);
        return path;
    }
    const double h = 1.0 / n_steps;
    for (int s = 0; s < n_steps; ++s) {
        State k1 = frozen_field(F, xi, y);
        State k2 = frozen_field(F, xi, axpy(y, h / 2, k1));
        State k3 = frozen_field(F, xi, axpy(y, h / 2, k2));
        State k4 = frozen_field(F, xi, axpy(y, h, k3));
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        if (F.domain.kind == DomainKind::Box && !F.domain.contains(y))
            throw EscapeError("flow left the box domain", (s + 1) * h);
        if (keep_path) path.push_back(y);
    }
    if (!keep_path) path.push_back(y);
    return path;
}

State wrap(const Domain& d, State y) {
    if (d.kind != DomainKind::Torus) return y;
    for (double& v : y) {
        if (v >= 0.0 && v < kTwoPi) continue;
        v = std::fmod(v, kTwoPi);
        if (v < 0.0) v += kTwoPi;
        if (v >= kTwoPi) v = 0.0;
    }
    return y;
}

}  // namespace

IdentityBisubmersion::IdentityBisubmersion(const FoliationModule& F, double r, int n_steps)
    : module(&F), radius(r), steps(n_steps) {
    if (!(r > 0.0)) throw InputError("neighborhood radius must be positive");
    if (n_steps < 1) throw InputError("integrator needs at least one step");
}

std::vector<double> IdentityBisubmersion::source(std::span<const double> y, std::span<const double> xi) const {
    check_args(*this, y, xi);
    return {y.begin(), y.end()};
}

std::vector<double> IdentityBisubmersion::target(std::span<const double> y, std::span<const double> xi) const {
    return target(y, xi, steps);
}

std::vector<double> IdentityBisubmersion::target(std::span<const double> y, std::span<const double> xi,
                                                 int n_steps) const {
    check_args(*this, y, xi);
    if (n_steps < 1) throw InputError("integrator needs at least one step");
    return wrap(module->domain, integrate(*this, y, xi, n_steps, false).back());
}

std::vector<std::vector<double>> IdentityBisubmersion::trajectory(std::span<const double> y,
                                                                  std::span<const double> xi) const {
    check_args(*this, y, xi);
    return integrate(*this, y, xi, steps, true);
}

SubmersionResult check_submersion(const IdentityBisubmersion& B,
                                  const std::vector<std::pair<std::vector<double>, std::vector<double>>>& samples,
                                  double fd_step) {
    const FoliationModule& F = *B.module;
    const int n = F.dim();
    const int N = F.rank();
    for (const auto& [y, xi] : samples) {
        check_args(B, y, xi);
        Eigen::MatrixXd J(n, n + N);
        auto column = [&](int c, const std::vector<double>& yp, const std::vector<double>& yq,
                          const std::vector<double>& xp, const std::vector<double>& xq) {
            // Unwrapped endpoints so that torus differences stay local.
            auto tp = integrate(B, yp, xp, B.steps, false).back();
            auto tq = integrate(B, yq, xq, B.steps, false).back();
            for (int i = 0; i < n; ++i) J(i, c) = (tp[i] - tq[i]) / (2 * fd_step);
        };
        for (int j = 0; j < n; ++j) {
            auto yp = y, yq = y;
            yp[j] += fd_step;
            yq[j] -= fd_step;
            column(j, yp, yq, xi, xi);
        }
        for (int k = 0; k < N; ++k) {
            auto xp = xi, xq = xi;
            xp[k] += fd_step;
            xq[k] -= fd_step;
            column(n + k, y, y, xp, xq);
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
        const auto& s = svd.singularValues();
        int rank = 0;
        for (Eigen::Index i = 0; i < s.size(); ++i)
            if (s(i) > 1e-6) ++rank;
        if (rank < n) {
            return {false, SubmersionWitness{y, xi, rank, std::vector<double>(s.data(), s.data() + s.size())}};
        }
    }
    return {true, std::nullopt};
}

int minimality_gap(const IdentityBisubmersion& B, std::span<const double> x, int degree_cap) {
    return B.module->rank() - fiber_dimension(*B.module, x, degree_cap);
}

ConvergenceReport convergence_order(const IdentityBisubmersion& B, std::span<const double> y,
                                    std::span<const double> xi, std::vector<int> steps) {
    check_args(B, y, xi);
    if (steps.size() < 2) throw InputError("convergence_order needs at least two step counts");
    ConvergenceReport out;
    out.steps = steps;
    for (int s : steps) {
        auto a = integrate(B, y, xi, s, false).back();
        auto b = integrate(B, y, xi, 2 * s, false).back();
        double d = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
        out.differences.push_back(d);
    }
    double acc = 0.0;
    int used = 0;
    for (std::size_t i = 0; i + 1 < out.differences.size(); ++i) {
        if (out.differences[i + 1] <= 0.0 || out.differences[i] <= 0.0) continue;
        acc += std::log2(out.differences[i] / out.differences[i + 1]);
        ++used;
    }
    // Exactly integrated flows (constant fields) have no measurable error.
    out.order = used ? acc / used : std::numeric_limits<double>::infinity();
    return out;
}

}  // namespace folpsi
