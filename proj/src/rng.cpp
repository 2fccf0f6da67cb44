#include "crrr/rng.hpp"

#include "crrr/link.hpp"

namespace crrr::rng {

double Stream::next_normal() { return norm_quantile(next_uniform()); }

}  // namespace crrr::rng
