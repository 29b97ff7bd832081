#include "skewvnj/search.hpp"

#include "skewvnj/errors.hpp"

namespace skewvnj {

void SearchConfig::validate() const {
  if (grid_theta < 8) throw ConfigError("grid_theta must be >= 8");
  if (grid_t < 2) throw ConfigError("grid_t must be >= 2");
  if (refine_rounds < 0) throw ConfigError("refine_rounds must be >= 0");
  if (multistart < 1) throw ConfigError("multistart must be >= 1");
  if (!(tol > 0.0)) throw ConfigError("tol must be > 0");
  if (threads < 0) throw ConfigError("threads must be >= 0");
}

SearchConfig SearchConfig::doubled() const {
  SearchConfig c = *this;
  c.grid_theta *= 2;
  c.grid_t = 2 * c.grid_t - 1;  // keeps every old t node
  return c;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace skewvnj
