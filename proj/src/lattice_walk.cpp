#include "dualball/lattice_walk.hpp"

#include <vector>

namespace dualball {

namespace {

struct ShellWalker {
  std::size_t dim;
  long shell;
  const std::function<bool(const LatticeVector&)>& visit;
  std::vector<long> zigzag;  // 0, 1, -1, ..., shell, -shell
  LatticeVector point;
  std::size_t visited = 0;
  bool stopped = false;

  void run(std::size_t pos, bool hit) {
    if (stopped) return;
    if (pos == dim) {
      ++visited;
      if (!visit(point)) stopped = true;
      return;
    }
    const bool last = pos + 1 == dim;
    for (long v : zigzag) {
      bool on_shell = v == shell || v == -shell;
      if (last && !hit && !on_shell) continue;
      point[pos] = v;
      run(pos + 1, hit || on_shell);
      if (stopped) return;
    }
  }
};

}  // namespace

std::size_t for_each_lattice_point(std::size_t dim, std::size_t radius,
                                   const std::function<bool(const LatticeVector&)>& visit) {
  std::size_t total = 0;
  for (std::size_t s = 0; s <= radius; ++s) {
    ShellWalker w{dim, static_cast<long>(s), visit, {}, LatticeVector(dim, Integer(0))};
    w.zigzag.push_back(0);
    for (long k = 1; k <= w.shell; ++k) {
      w.zigzag.push_back(k);
      w.zigzag.push_back(-k);
    }
    w.run(0, dim == 0);
    total += w.visited;
    if (w.stopped) break;
  }
  return total;
}

}  // namespace dualball
