#include "hamix/decibel.hpp"

#include <cmath>
#include <string>

#include "hamix/error.hpp"

namespace hamix {

double db_to_linear(double db) noexcept { return std::pow(10.0, db / 20.0); }

double linear_to_db(double factor) {
  if (!(factor > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "linear_to_db needs a positive factor, got " +
                    std::to_string(factor));
  }
  return 20.0 * std::log10(factor);
}

}  // namespace hamix
