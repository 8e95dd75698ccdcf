#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace zigzag {

using Vec = std::vector<double>;

struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;  // row-major

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}
    Matrix(std::size_t r, std::size_t c, std::vector<double> values);

    static Matrix identity(std::size_t n);
    static Matrix diag(std::span<const double> d);

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
    std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }

    bool empty() const { return data.empty(); }
    Matrix transpose() const;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Vec operator*(const Matrix& a, std::span<const double> x);

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

double dot(std::span<const double> a, std::span<const double> b);
// a += s * b
void axpy(double s, std::span<const double> b, std::span<double> a);
Vec scaled(std::span<const double> a, double s);
Vec added(std::span<const double> a, std::span<const double> b, double sb = 1.0);
void require_finite(std::span<const double> v, const char* what);

// ---------------------------------------------------------------------------
// Norm catalogue. Points are flat coordinate arrays; matrix-valued kinds carry
// their shape. Gram points are representer coefficients c with ‖v‖² = cᵀGc.

enum class NormKind { Lp, WeightedL2, GroupP2, Spectral, Trace, Sup, One, Gram };

struct Norm {
    NormKind kind = NormKind::Lp;
    double p = 2.0;
    Matrix weight;          // PSD matrix for WeightedL2 / Gram
    std::size_t rows = 0;   // matrix shape for GroupP2 / Spectral / Trace
    std::size_t cols = 0;

    static Norm lp(double p);
    static Norm l2() { return lp(2.0); }
    static Norm sup();
    static Norm one();
    static Norm weighted_l2(Matrix a);
    static Norm gram(Matrix g);
    static Norm group_p2(double p, std::size_t rows, std::size_t cols);
    static Norm spectral(std::size_t rows, std::size_t cols);
    static Norm trace(std::size_t rows, std::size_t cols);

    // Dimension a point must have, or 0 when any dimension is accepted.
    std::size_t required_dim() const;
    std::string name() const;
};

double norm(std::span<const double> v, const Norm& tag);
double norm(const Matrix& m, const Norm& tag);

// Pairing ⟨w, g⟩ between a comparator and a point; Gram points pair through G.
double pairing(std::span<const double> w, std::span<const double> g, const Norm& tag);

struct Conjugate {
    double p_prime;  // p/(p-1)
    double p_star;   // max{p, p'}
};
Conjugate conjugate(double p);

// argmin of ⟨w, g⟩ over the unit ball of the dual of `tag`.
Vec dual_ball_lmo(std::span<const double> g, const Norm& tag);
// Same over conv(vertices) for an explicit symmetric atom list.
Vec vertex_lmo(std::span<const double> g, const std::vector<Vec>& vertices);
double atomic_dual_norm(std::span<const double> g, const std::vector<Vec>& vertices);

// max over 0 ≤ a ≤ b ≤ T of ‖P_b − P_a‖ for prefixes P_0 = 0, ..., P_T.
double prefix_interval_sup(const std::vector<Vec>& prefixes, const Norm& tag);

// Incremental form: push increments one at a time; O(T) per push.
class IntervalSupTracker {
public:
    explicit IntervalSupTracker(Norm tag) : tag_(std::move(tag)) {}

    void push(std::span<const double> increment);
    double value() const { return best_; }
    std::size_t length() const { return prefixes_.empty() ? 0 : prefixes_.size() - 1; }
    void reset();

private:
    Norm tag_;
    std::vector<Vec> prefixes_;
    double best_ = 0.0;
};

// ---------------------------------------------------------------------------
// Dense decompositions (Jacobi), sized for d ≤ 64.

Vec singular_values(const Matrix& a);

struct Svd {
    Matrix u;  // rows × k
    Vec s;     // k = min(rows, cols), descending
    Matrix v;  // cols × k
};
Svd svd(const Matrix& a);

struct SymEigen {
    Vec values;     // ascending
    Matrix vectors; // columns are eigenvectors
};
SymEigen sym_eigen(const Matrix& a);

inline constexpr double kPsdTolerance = -1e-10;
void require_psd(const Matrix& a, const char* what);
Matrix psd_sqrt(const Matrix& a);

}  // namespace zigzag
