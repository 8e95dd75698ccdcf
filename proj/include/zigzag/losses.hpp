#pragma once

#include <string>
#include <string_view>

namespace zigzag {

// Convex, 1-Lipschitz losses in the first argument.
enum class LossKind { Hinge, Absolute, Linear };

double loss(LossKind kind, double yhat, double y);

// Subgradient selection: 0 at the hinge kink and at yhat == y for absolute.
double dloss(LossKind kind, double yhat, double y);

LossKind parse_loss(std::string_view name);
std::string loss_name(LossKind kind);

}  // namespace zigzag
