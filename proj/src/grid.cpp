#include "folpsi/grid.hpp"

#include "folpsi/error.hpp"

#include <cmath>
#include <numbers>

namespace folpsi {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_same_grid(const PeriodicGrid& a, const PeriodicGrid& b, const char* what) {
    if (!(a == b)) throw InputError(std::string(what) + ": grid mismatch");
}
}  // namespace

PeriodicGrid::PeriodicGrid(int dim, int points_per_axis, std::vector<double> origin)
    : dim_(dim), g_(points_per_axis), origin_(std::move(origin)) {
    if (dim < 1) throw InputError("grid dimension must be >= 1");
    if (points_per_axis < 4 || points_per_axis % 2 != 0)
        throw InputError("points per axis must be even and >= 4");
    if (origin_.empty()) origin_.assign(dim, 0.0);
    if (static_cast<int>(origin_.size()) != dim) throw InputError("grid origin has wrong dimension");
    size_ = 1;
    for (int d = 0; d < dim; ++d) size_ *= static_cast<std::size_t>(g_);
    roots_.resize(g_);
    for (int k = 0; k < g_; ++k) roots_[k] = std::polar(1.0, kTwoPi * k / g_);
}

double PeriodicGrid::spacing() const {
    return kTwoPi / g_;
}

double PeriodicGrid::cell_weight() const {
    return std::pow(spacing(), dim_);
}

std::vector<int> PeriodicGrid::multi_index(std::size_t flat) const {
    std::vector<int> m(dim_);
    for (int d = 0; d < dim_; ++d) {
        m[d] = static_cast<int>(flat % g_);
        flat /= g_;
    }
    return m;
}

std::size_t PeriodicGrid::flat_index(std::span<const int> multi) const {
    std::size_t flat = 0;
    for (int d = dim_ - 1; d >= 0; --d) flat = flat * g_ + static_cast<std::size_t>(((multi[d] % g_) + g_) % g_);
    return flat;
}

std::vector<double> PeriodicGrid::point(std::size_t flat) const {
    auto m = multi_index(flat);
    std::vector<double> x(dim_);
    for (int d = 0; d < dim_; ++d) x[d] = origin_[d] + spacing() * m[d];
    return x;
}

long PeriodicGrid::find_point(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim_) return -1;
    std::vector<int> m(dim_);
    for (int d = 0; d < dim_; ++d) {
        double s = (x[d] - origin_[d]) / spacing();
        double r = std::round(s);
        if (std::abs(s - r) > 1e-9) return -1;
        m[d] = static_cast<int>(r);
    }
    return static_cast<long>(flat_index(m));
}

std::vector<int> PeriodicGrid::frequency(std::size_t flat) const {
    auto m = multi_index(flat);
    for (int& k : m)
        if (k >= g_ / 2) k -= g_;
    return m;
}

std::size_t PeriodicGrid::frequency_index(std::span<const int> xi) const {
    for (int k : xi)
        if (k < -g_ / 2 || k >= g_ / 2) throw AliasingError("frequency outside [-G/2, G/2)");
    return flat_index(xi);
}

bool PeriodicGrid::on_nyquist_line(std::span<const int> xi) const {
    for (int k : xi)
        if (k == -g_ / 2) return true;
    return false;
}

cplx PeriodicGrid::character(std::size_t x_flat, std::size_t xi_flat) const {
    cplx v = 1.0;
    double origin_phase = 0.0;
    for (int d = 0; d < dim_; ++d) {
        int j = static_cast<int>(x_flat % g_);
        int k = static_cast<int>(xi_flat % g_);
        x_flat /= g_;
        xi_flat /= g_;
        v *= roots_[(static_cast<long>(j) * k) % g_];
        if (origin_[d] != 0.0) origin_phase += origin_[d] * (k >= g_ / 2 ? k - g_ : k);
    }
    return origin_phase == 0.0 ? v : v * std::polar(1.0, origin_phase);
}

// ---------------------------------------------------------------------------

GridFunction::GridFunction(PeriodicGrid g, CVector v) : grid(std::move(g)), values(std::move(v)) {
    if (static_cast<std::size_t>(values.size()) != grid.size()) throw InputError("grid function has wrong length");
}

GridOperator::GridOperator(PeriodicGrid g, CMatrix m) : grid(std::move(g)), matrix(std::move(m)) {
    auto n = static_cast<Eigen::Index>(grid.size());
    if (matrix.rows() != n || matrix.cols() != n) throw InputError("grid operator has wrong shape");
}

GridOperator GridOperator::identity(const PeriodicGrid& g) {
    auto n = static_cast<Eigen::Index>(g.size());
    return {g, CMatrix::Identity(n, n)};
}

GridOperator GridOperator::multiplication(const PeriodicGrid& g, const CVector& weights) {
    return {g, weights.asDiagonal().toDenseMatrix()};
}

GridFunction GridOperator::operator()(const GridFunction& f) const {
    require_same_grid(grid, f.grid, "operator application");
    return {grid, matrix * f.values};
}

GridOperator operator*(const GridOperator& a, const GridOperator& b) {
    require_same_grid(a.grid, b.grid, "operator product");
    return {a.grid, a.matrix * b.matrix};
}

GridOperator operator+(const GridOperator& a, const GridOperator& b) {
    require_same_grid(a.grid, b.grid, "operator sum");
    return {a.grid, a.matrix + b.matrix};
}

GridOperator operator-(const GridOperator& a, const GridOperator& b) {
    require_same_grid(a.grid, b.grid, "operator difference");
    return {a.grid, a.matrix - b.matrix};
}

GridOperator operator*(cplx s, const GridOperator& a) {
    return {a.grid, s * a.matrix};
}

// ---------------------------------------------------------------------------

namespace {

/// In-place separable DFT; sign -1 is forward (unnormalized here).
CVector separable_dft(const PeriodicGrid& g, const CVector& in, int sign) {
    const int n = g.points_per_axis();
    std::vector<cplx> roots(n);
    for (int k = 0; k < n; ++k) roots[k] = std::polar(1.0, sign * kTwoPi * k / n);
    CVector cur = in;
    CVector next(cur.size());
    std::vector<cplx> line(n);
    std::size_t stride = 1;
    for (int d = 0; d < g.dim(); ++d) {
        std::size_t block = stride * n;
        for (std::size_t base = 0; base < g.size(); base += block) {
            for (std::size_t off = 0; off < stride; ++off) {
                for (int j = 0; j < n; ++j) line[j] = cur[static_cast<Eigen::Index>(base + off + j * stride)];
                for (int k = 0; k < n; ++k) {
                    cplx acc = 0.0;
                    for (int j = 0; j < n; ++j) acc += line[j] * roots[(static_cast<long>(j) * k) % n];
                    next[static_cast<Eigen::Index>(base + off + k * stride)] = acc;
                }
            }
        }
        std::swap(cur, next);
        stride = block;
    }
    return cur;
}

/// exp(sign * i <origin, xi>) per frequency index; all ones for a zero origin.
CVector origin_phases(const PeriodicGrid& g, int sign) {
    CVector ph = CVector::Ones(static_cast<Eigen::Index>(g.size()));
    bool any = false;
    for (double o : g.origin()) any = any || o != 0.0;
    if (!any) return ph;
    for (std::size_t i = 0; i < g.size(); ++i) {
        auto xi = g.frequency(i);
        double phase = 0.0;
        for (int d = 0; d < g.dim(); ++d) phase += g.origin()[d] * xi[d];
        ph[static_cast<Eigen::Index>(i)] = std::polar(1.0, sign * phase);
    }
    return ph;
}

}  // namespace

CVector forward_dft(const PeriodicGrid& g, const CVector& f) {
    if (static_cast<std::size_t>(f.size()) != g.size()) throw InputError("forward_dft: wrong length");
    CVector out = separable_dft(g, f, -1) / static_cast<double>(g.size());
    return out.cwiseProduct(origin_phases(g, -1));
}

CVector inverse_dft(const PeriodicGrid& g, const CVector& fhat) {
    if (static_cast<std::size_t>(fhat.size()) != g.size()) throw InputError("inverse_dft: wrong length");
    return separable_dft(g, fhat.cwiseProduct(origin_phases(g, 1)), 1);
}

cplx inner(const GridFunction& f, const GridFunction& g) {
    require_same_grid(f.grid, g.grid, "inner product");
    return f.grid.cell_weight() * f.values.dot(g.values);
}

double l2_norm(const GridFunction& f) {
    return std::sqrt(f.grid.cell_weight()) * f.values.norm();
}

double max_norm(const CVector& v) {
    return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

GridFunction plane_wave(const PeriodicGrid& g, std::span<const int> xi) {
    std::size_t k = g.frequency_index(xi);
    GridFunction out(g);
    double scale = std::pow(kTwoPi, -0.5 * g.dim());
    for (std::size_t i = 0; i < g.size(); ++i) out.values[static_cast<Eigen::Index>(i)] = scale * g.character(i, k);
    return out;
}

CMatrix spectral_derivative_matrix(const PeriodicGrid& g, int axis, bool zero_nyquist) {
    if (axis < 0 || axis >= g.dim()) throw InputError("derivative axis out of range");
    const int n = g.points_per_axis();
    // One-dimensional kernel D[j, l] = (1/n) sum_k i k exp(i k (j - l) 2pi/n), then Kronecker-embed.
    Eigen::MatrixXcd d1(n, n);
    for (int j = 0; j < n; ++j) {
        for (int l = 0; l < n; ++l) {
            cplx acc = 0.0;
            for (int kk = 0; kk < n; ++kk) {
                int k = kk >= n / 2 ? kk - n : kk;
                if (zero_nyquist && k == -n / 2) continue;
                acc += cplx(0.0, k) * std::polar(1.0, kTwoPi * ((static_cast<long>(k) * (j - l)) % n) / n);
            }
            d1(j, l) = acc / static_cast<double>(n);
        }
    }
    auto size = static_cast<Eigen::Index>(g.size());
    CMatrix out = CMatrix::Zero(size, size);
    for (std::size_t row = 0; row < g.size(); ++row) {
        auto m = g.multi_index(row);
        int j = m[axis];
        for (int l = 0; l < n; ++l) {
            m[axis] = l;
            out(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(g.flat_index(m))) = d1(j, l);
        }
    }
    return out;
}

}  // namespace folpsi
