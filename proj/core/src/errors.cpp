#include "calderon/numkit/errors.hpp"

#include <sstream>

namespace calderon {

namespace {
std::string conditioning_message(int k, double estimate, double budget) {
  std::ostringstream os;
  os << "radial generator system ill-conditioned at k=" << k << " (estimate " << estimate
     << " exceeds budget " << budget << ")";
  return os.str();
}
}  // namespace

ConditioningError::ConditioningError(int failing_k, double estimate, double budget)
    : Error(conditioning_message(failing_k, estimate, budget)),
      failing_k_(failing_k),
      estimate_(estimate) {}

InfeasibleError::InfeasibleError(const std::string& what, double achieved_residual,
                                 double budget)
    : Error(what), achieved_(achieved_residual), budget_(budget) {}

}  // namespace calderon
