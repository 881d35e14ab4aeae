#include <cstdio>

#include "ale/acceptance.hpp"

int main() {
  const auto criteria = ale::run_acceptance_suite();
  bool all = true;
  for (const auto& c : criteria) {
    std::printf("%-4s criterion %2d: %s\n", c.pass ? "PASS" : "FAIL", c.index,
                c.name.c_str());
    for (const auto& chk : c.checks)
      if (!chk.pass)
        std::printf("     failed: %s computed=%.12g target=%.12g tol=%.3g\n",
                    chk.name.c_str(), chk.computed, chk.target,
                    chk.tolerance);
    all = all && c.pass;
  }
  return all ? 0 : 1;
}
