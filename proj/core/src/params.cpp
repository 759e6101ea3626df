#include "calderon/numkit/params.hpp"

#include <cmath>
#include <string>

#include "calderon/numkit/errors.hpp"

namespace calderon {

void ProblemParams::validate() const {
  if (n < 1 || n > 3) throw ParameterError("dimension n must be 1, 2 or 3, got " + std::to_string(n));
  if (!(s > 0.0 && s < 1.0)) throw ParameterError("fractional order s must lie in (0,1), got " + std::to_string(s));
  if (quad_nodes < 16) throw ParameterError("quad_nodes must be at least 16");
  if (precision_bits < 53) throw ParameterError("precision_bits must be at least 53");
  if (!(tol_quad > 0.0) || !std::isfinite(tol_quad)) throw ParameterError("tol_quad must be positive");
}

}  // namespace calderon
