#include "critlimit/rng.hpp"

#include <numbers>

namespace critlimit {

Complex Rng::unit_complex() { return std::polar(1.0, 2.0 * std::numbers::pi * uniform()); }

}  // namespace critlimit
