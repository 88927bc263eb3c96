#include "wmlab/config.hpp"

namespace wmlab {

const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

}  // namespace wmlab
