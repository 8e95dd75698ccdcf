#pragma once

#include <memory>
#include <span>
#include <string>
#include <variant>

#include "zigzag/linalg.hpp"

namespace zigzag {

enum class Construction {
    ScalarP,
    LpSum,
    WeightedL2,
    HilbertP,
    GroupP2,
    ElementaryScalarK,
    ZetaL1Weak,
    U1Composed,
};

std::string construction_name(Construction c);
Construction parse_construction(std::string_view name);

// α_p = p(1 − 1/p⋆)^{p−1}
double burkholder_alpha(double p);
// β_p = p⋆ − 1
double burkholder_beta(double p);

struct ElementaryParams {
    int k = 4;
    double c = 0.0;               // coefficient of x^{k−2}y²
    double b = 0.0;               // coefficient of y^k
    double majorant_coeff = 0.0;  // C^{k/2} + (k/2)B
};

// Constants of x^k − C x^{k−2} y² − B y^k, scaled by k/2. Requires even k ≥ 4.
ElementaryParams elementary_scalar_params(int k);

struct ZetaL1Params {
    double a = 10.0;
    std::size_t d = 1;

    // a ≥ d·log d; below it the function is still defined but not certified.
    bool valid() const;
};

double zeta_l1(std::span<const double> x, std::span<const double> y, const ZetaL1Params& params);
// Canonical biconvex extension: max{ζ, ‖x+y‖₁} inside the unit ball, ‖x+y‖₁ outside.
double zeta_canonical_u(std::span<const double> x, std::span<const double> y, const ZetaL1Params& params);

// An immutable Burkholder function instance. Points are flat coordinate
// arrays of length dim(); matrix constructions use row-major layout.
class BurkholderSpec {
public:
    static BurkholderSpec scalar(double p);
    static BurkholderSpec lp_sum(double p, std::size_t d);
    static BurkholderSpec weighted_l2(Matrix a);
    static BurkholderSpec hilbert(double p, std::size_t d);
    static BurkholderSpec hilbert_gram(double p, Matrix gram);
    static BurkholderSpec group_p2(double p, std::size_t rows, std::size_t cols);
    static BurkholderSpec elementary_scalar(int k);

    Construction construction() const { return construction_; }
    std::string name() const;
    std::size_t dim() const { return dim_; }
    // Exponent of the upper-bounded quantity ‖x‖^p − D^p‖y‖^p (1 for weak/U₁ types).
    double p() const { return p_; }
    double alpha_p() const { return alpha_; }
    // The constant D_p (β_p for the Example constructions).
    double beta() const { return beta_; }
    const Norm& space_norm() const { return norm_; }

    double evaluate(std::span<const double> x, std::span<const double> y) const;

    // d/dα U(x + αz, y + σαz) at α = 0; at |·| kinks sign(0) := 0.
    double zigzag_dirderiv(std::span<const double> x, std::span<const double> y,
                           std::span<const double> z, int sigma) const;

    // The function this spec must dominate: ‖x‖^p − D^p‖y‖^p, the elementary
    // shifted bound, 𝟙{‖x‖≥1} − β‖y‖ for weak type, or ‖x‖ − β‖y‖ − ε for U₁.
    double majorant(std::span<const double> x, std::span<const double> y) const;
    // Same family with an overridden constant D (used for negative controls
    // and for fitting the U₁ constant).
    double majorant_with_beta(std::span<const double> x, std::span<const double> y, double beta) const;

    const ElementaryParams* elementary() const;
    const ZetaL1Params* zeta() const;
    double weak_u00() const;

    struct U1Data {
        std::shared_ptr<const BurkholderSpec> weak;
        double bound = 0.0;  // B
        double eps = 0.0;
        int terms = 0;       // N = ⌈B/ε⌉
        double lambda(int k) const { return k * eps; }
    };
    const U1Data* u1() const;

    friend BurkholderSpec weak_type_from_zeta(const ZetaL1Params& params);
    friend BurkholderSpec compose_u1(const BurkholderSpec& weak, double bound, double eps);

private:
    struct ScalarData {};
    struct LpData {};
    struct WeightedData {
        Matrix sqrt_a;
    };
    struct HilbertData {
        Matrix gram;  // empty for the Euclidean case
    };
    struct GroupData {
        std::size_t rows = 0, cols = 0;
    };
    struct WeakData {
        ZetaL1Params params;
        double u00 = 0.0;
    };
    using Data = std::variant<ScalarData, LpData, WeightedData, HilbertData, GroupData, ElementaryParams,
                              WeakData, U1Data>;

    BurkholderSpec(Construction c, double p, std::size_t dim, Norm norm, Data data);
    void check_dims(std::span<const double> x, std::span<const double> y) const;
    double hilbert_norm(std::span<const double> v) const;
    double hilbert_inner(std::span<const double> a, std::span<const double> b) const;

    Construction construction_;
    double p_;
    double alpha_;
    double beta_;
    std::size_t dim_;
    Norm norm_;
    Data data_;
};

// Weak-type function U(x,y) = 1 − u(x+y, y−x)/u(0,0) for ℓ1.
BurkholderSpec weak_type_from_zeta(const ZetaL1Params& params);

// U₁(x,y) = ε Σ_{k=1}^{N} U_weak(x/λ_k, y/λ_k), N = ⌈B/ε⌉, λ_k = kε.
BurkholderSpec compose_u1(const BurkholderSpec& weak, double bound, double eps);

}  // namespace zigzag
