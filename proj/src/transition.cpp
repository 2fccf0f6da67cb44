#include "crrr/transition.hpp"

#include <cmath>
#include <sstream>

namespace crrr {

TransitionMatrix transition_matrix(const RankVector& u, const RankVector& v, int k) {
  if (k < 2) throw ConfigError("transition matrix needs k >= 2");
  if (u.n() != v.n()) throw InputMismatch("transition_matrix: rank vectors differ in length");
  const Index n = u.n();
  if (n < static_cast<Index>(k) * k) {
    throw InsufficientData("transition matrix with k=" + std::to_string(k) + " needs n >= " +
                           std::to_string(k * k));
  }

  TransitionMatrix tm;
  tm.k = k;
  tm.n = n;
  tm.kind = (u.kind == RankKind::marginal && v.kind == RankKind::marginal)
                ? RankKind::marginal
                : RankKind::conditional;
  tm.counts = Matrix::Zero(k, k);
  auto bin = [k](double rank) {
    int b = static_cast<int>(std::ceil(static_cast<double>(k) * rank));
    return std::clamp(b, 1, k);
  };
  for (Index i = 0; i < n; ++i) {
    tm.counts(bin(v.values[i]) - 1, bin(u.values[i]) - 1) += 1.0;
  }
  const double benchmark = 1.0 / (static_cast<double>(k) * k);
  tm.deviations = 100.0 * (tm.counts.array() / static_cast<double>(n) - benchmark);
  return tm;
}

std::string transition_to_csv(const TransitionMatrix& tm) {
  std::ostringstream out;
  out.precision(12);
  for (int r = 0; r < tm.k; ++r) {
    for (int c = 0; c < tm.k; ++c) {
      if (c > 0) out << ',';
      out << tm.deviations(r, c);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace crrr
