#pragma once

namespace hamix {

/// 10^(db/20).
double db_to_linear(double db) noexcept;

/// 20·log10(factor). Throws Error(kInvalidArgument) for factor <= 0.
double linear_to_db(double factor);

}  // namespace hamix
