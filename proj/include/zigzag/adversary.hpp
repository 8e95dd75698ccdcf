#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "zigzag/linalg.hpp"
#include "zigzag/rng.hpp"

namespace zigzag {

// Nature's side of the protocol: x_t is revealed before the prediction, y_t
// after it (and may depend on it).
class Adversary {
public:
    virtual ~Adversary() = default;
    virtual std::size_t dim() const = 0;
    virtual Vec features(std::size_t t) = 0;
    virtual double label(std::size_t t, std::span<const double> x, double yhat) = 0;
};

enum class AdversaryKind { IidGaussian, IidRademacherCoords, FixedFile, SignFlip, LowRankStream, MatrixEntryStream };

AdversaryKind parse_adversary(std::string_view name);
std::string adversary_name(AdversaryKind kind);

struct AdversaryParams {
    AdversaryKind kind = AdversaryKind::IidGaussian;
    std::size_t dim = 1;
    Norm norm = Norm::l2();  // features are rescaled onto this unit sphere
    bool normalize = true;
    double label_noise = 0.1;  // probability of flipping the teacher's label
    std::size_t rank = 2;      // low-rank-stream
    std::size_t matrix_d = 0;  // matrix-entry-stream: dim = matrix_d²
    std::string file;          // fixed-file
};

std::unique_ptr<Adversary> make_adversary(const AdversaryParams& params, std::uint64_t seed);

// Rescales v so that ‖v‖ = 1 in `tag` (zero vectors are left alone).
void normalize_onto_sphere(Vec& v, const Norm& tag);

// A stream fixed in advance; labels ignore the prediction.
class FixedAdversary : public Adversary {
public:
    FixedAdversary(std::vector<Vec> xs, std::vector<double> ys);
    std::size_t dim() const override { return dim_; }
    Vec features(std::size_t t) override;
    double label(std::size_t t, std::span<const double> x, double yhat) override;
    std::size_t size() const { return xs_.size(); }

private:
    std::vector<Vec> xs_;
    std::vector<double> ys_;
    std::size_t dim_ = 0;
};

// Reads {"xs": [[...], ...], "ys": [...]} from a JSON file.
std::unique_ptr<FixedAdversary> load_fixed_adversary(const std::string& path);

}  // namespace zigzag
