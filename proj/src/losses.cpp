#include "zigzag/losses.hpp"

#include <cmath>
#include <stdexcept>

namespace zigzag {

double loss(LossKind kind, double yhat, double y) {
    switch (kind) {
        case LossKind::Hinge: return std::max(0.0, 1.0 - yhat * y);
        case LossKind::Absolute: return std::abs(yhat - y);
        case LossKind::Linear: return -yhat * y;
    }
    return 0.0;
}

double dloss(LossKind kind, double yhat, double y) {
    switch (kind) {
        case LossKind::Hinge: return 1.0 - yhat * y > 0.0 ? -y : 0.0;
        case LossKind::Absolute: return yhat > y ? 1.0 : (yhat < y ? -1.0 : 0.0);
        case LossKind::Linear: return -y;
    }
    return 0.0;
}

LossKind parse_loss(std::string_view name) {
    if (name == "hinge") return LossKind::Hinge;
    if (name == "absolute") return LossKind::Absolute;
    if (name == "linear") return LossKind::Linear;
    throw std::invalid_argument("unknown loss '" + std::string(name) + "'");
}

std::string loss_name(LossKind kind) {
    switch (kind) {
        case LossKind::Hinge: return "hinge";
        case LossKind::Absolute: return "absolute";
        case LossKind::Linear: return "linear";
    }
    return "?";
}

}  // namespace zigzag
