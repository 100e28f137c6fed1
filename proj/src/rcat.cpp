#include "curvcert/rcat.hpp"

namespace curvcert {

double h_threshold(double d12, double d13, double d23, const HParams& params) {
  return params.eps / std::max({1.0, d12, d13, d23});
}

}  // namespace curvcert
