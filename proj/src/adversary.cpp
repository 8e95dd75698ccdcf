#include "zigzag/adversary.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace zigzag {

namespace {

double sign_tie_plus(double v) { return v < 0.0 ? -1.0 : 1.0; }

class StreamAdversary : public Adversary {
public:
    StreamAdversary(const AdversaryParams& params, std::uint64_t seed)
        : params_(params), features_rng_(Rng(seed).split(1)), label_rng_(Rng(seed).split(2)) {
        Rng teacher = Rng(seed).split(0);
        teacher_.resize(params.dim);
        for (double& w : teacher_) w = teacher.normal();
        if (params.kind == AdversaryKind::LowRankStream) {
            if (params.rank == 0) throw std::invalid_argument("low-rank-stream needs rank >= 1");
            basis_ = Matrix(params.dim, params.rank);
            for (double& b : basis_.data) b = teacher.normal();
        }
    }

    std::size_t dim() const override { return params_.dim; }

    Vec features(std::size_t) override {
        Vec x(params_.dim);
        switch (params_.kind) {
            case AdversaryKind::IidRademacherCoords:
                for (double& v : x) v = features_rng_.rademacher();
                break;
            case AdversaryKind::LowRankStream: {
                Vec g(params_.rank);
                for (double& v : g) v = features_rng_.normal();
                x = basis_ * g;
                break;
            }
            default:
                for (double& v : x) v = features_rng_.normal();
                break;
        }
        if (params_.normalize) normalize_onto_sphere(x, params_.norm);
        return x;
    }

    double label(std::size_t, std::span<const double> x, double yhat) override {
        if (params_.kind == AdversaryKind::SignFlip) return yhat > 0.0 ? -1.0 : 1.0;
        double y = sign_tie_plus(dot(teacher_, x));
        if (label_rng_.uniform() < params_.label_noise) y = -y;
        return y;
    }

private:
    AdversaryParams params_;
    Rng features_rng_;
    Rng label_rng_;
    Vec teacher_;
    Matrix basis_;
};

// Entries (i, j) of a d×d matrix, labelled by the sign of a random low-rank F*.
class MatrixEntryAdversary : public Adversary {
public:
    MatrixEntryAdversary(const AdversaryParams& params, std::uint64_t seed)
        : d_(params.matrix_d), rng_(Rng(seed).split(1)), target_(params.matrix_d, params.matrix_d) {
        if (d_ == 0) throw std::invalid_argument("matrix-entry-stream needs matrix_d >= 1");
        Rng teacher = Rng(seed).split(0);
        const std::size_t r = std::max<std::size_t>(1, params.rank);
        Matrix u(d_, r), v(d_, r);
        for (double& a : u.data) a = teacher.normal();
        for (double& a : v.data) a = teacher.normal();
        target_ = u * v.transpose();
    }

    std::size_t dim() const override { return d_ * d_; }

    Vec features(std::size_t) override {
        Vec x(d_ * d_, 0.0);
        last_i_ = rng_.below(d_);
        last_j_ = rng_.below(d_);
        x[last_i_ * d_ + last_j_] = 1.0;
        return x;
    }

    double label(std::size_t, std::span<const double>, double) override {
        return sign_tie_plus(target_(last_i_, last_j_));
    }

private:
    std::size_t d_;
    Rng rng_;
    Matrix target_;
    std::size_t last_i_ = 0, last_j_ = 0;
};

}  // namespace

AdversaryKind parse_adversary(std::string_view name) {
    if (name == "iid-gaussian") return AdversaryKind::IidGaussian;
    if (name == "iid-rademacher-coords") return AdversaryKind::IidRademacherCoords;
    if (name == "fixed-file") return AdversaryKind::FixedFile;
    if (name == "sign-flip") return AdversaryKind::SignFlip;
    if (name == "low-rank-stream") return AdversaryKind::LowRankStream;
    if (name == "matrix-entry-stream") return AdversaryKind::MatrixEntryStream;
    throw std::invalid_argument("unknown adversary: " + std::string(name));
}

std::string adversary_name(AdversaryKind kind) {
    switch (kind) {
        case AdversaryKind::IidGaussian: return "iid-gaussian";
        case AdversaryKind::IidRademacherCoords: return "iid-rademacher-coords";
        case AdversaryKind::FixedFile: return "fixed-file";
        case AdversaryKind::SignFlip: return "sign-flip";
        case AdversaryKind::LowRankStream: return "low-rank-stream";
        case AdversaryKind::MatrixEntryStream: return "matrix-entry-stream";
    }
    return "?";
}

void normalize_onto_sphere(Vec& v, const Norm& tag) {
    const double n = norm(v, tag);
    if (n > 0.0) {
        for (double& a : v) a /= n;
    }
}

std::unique_ptr<Adversary> make_adversary(const AdversaryParams& params, std::uint64_t seed) {
    switch (params.kind) {
        case AdversaryKind::FixedFile: {
            auto adv = load_fixed_adversary(params.file);
            if (adv->dim() != params.dim && params.dim != 0)
                throw DimensionError("fixed-file dimension does not match configured d");
            return adv;
        }
        case AdversaryKind::MatrixEntryStream:
            return std::make_unique<MatrixEntryAdversary>(params, seed);
        default:
            return std::make_unique<StreamAdversary>(params, seed);
    }
}

FixedAdversary::FixedAdversary(std::vector<Vec> xs, std::vector<double> ys) : xs_(std::move(xs)), ys_(std::move(ys)) {
    if (xs_.size() != ys_.size()) throw std::invalid_argument("fixed stream: xs and ys differ in length");
    dim_ = xs_.empty() ? 0 : xs_.front().size();
    for (const auto& x : xs_) {
        if (x.size() != dim_) throw DimensionError("fixed stream: ragged feature vectors");
        require_finite(x, "fixed stream feature");
    }
}

Vec FixedAdversary::features(std::size_t t) {
    if (t >= xs_.size()) throw std::out_of_range("fixed stream exhausted");
    return xs_[t];
}

double FixedAdversary::label(std::size_t t, std::span<const double>, double) {
    if (t >= ys_.size()) throw std::out_of_range("fixed stream exhausted");
    return ys_[t];
}

std::unique_ptr<FixedAdversary> load_fixed_adversary(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open adversary file: " + path);
    const auto doc = nlohmann::json::parse(in);
    return std::make_unique<FixedAdversary>(doc.at("xs").get<std::vector<Vec>>(),
                                            doc.at("ys").get<std::vector<double>>());
}

}  // namespace zigzag
