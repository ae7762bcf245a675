#include "bilinext/core.hpp"

#include <cmath>
#include <sstream>

namespace bilinext {

std::string LpExponent::to_string() const {
  if (is_inf()) return "inf";
  std::ostringstream os;
  os << p_;
  return os.str();
}

void OptimizerConfig::validate() const {
  if (restarts < 1) throw InputError("optimizer restarts must be >= 1");
  if (!(tol > 0.0)) throw InputError("optimizer tolerance must be > 0");
  if (max_iters < 1) throw InputError("optimizer max_iters must be >= 1");
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Vec gaussian_vector(Rng& rng, int n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

Mat gaussian_matrix(Rng& rng, int rows, int cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Mat m(rows, cols);
  // Row-major fill so that instances read the same way they are serialized.
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = normal(rng);
  return m;
}

}  // namespace bilinext
