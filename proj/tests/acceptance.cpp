#include <iostream>

#include "mcx/acceptance.hpp"

int main() {
  auto rows = mcx::acceptance::run_all(std::cout);
  int failed = 0;
  for (const auto& r : rows) failed += r.pass ? 0 : 1;
  std::cout << rows.size() - static_cast<std::size_t>(failed) << "/" << rows.size() << " criteria pass\n";
  return failed == 0 ? 0 : 1;
}
