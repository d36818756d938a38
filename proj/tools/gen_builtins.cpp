#include <iostream>
#include <string>
#include <variant>
#include <vector>

#include "apa.hpp"
#include "decomposition.hpp"
#include "format.hpp"
#include "zoo.hpp"

using namespace mmkit;

int main(int argc, char** argv) {
  std::string dir = argc > 1 ? argv[1] : "data/algorithms";
  std::vector<std::string> specs = {
      "strassen2x2",
      "winograd2x2",
      "straightforward(2,2,2)",
      "straightforward(1,2,3)",
      "complex_mult_rank3",
      "complex_mult_dual",
      "aggregation_pair(2,2,2)",
      "aggregation_pair(2,3,4)",
      "aggregation_triple(2)",
      "apa_pair(2,2,2)",
  };
  int failures = 0;
  for (const std::string& spec : specs) {
    try {
      AnyAlg alg = builtin_algorithm(spec);
      bool ok = false;
      if (const auto* apa = std::get_if<ApaAlgorithm>(&alg))
        ok = validate_border_rank(*apa).ok;
      else
        ok = validate_decomposition(std::get<Decomposition>(alg)).ok;
      if (!ok) {
        std::cerr << spec << ": failed validation, not written\n";
        ++failures;
        continue;
      }
      std::string path = dir + "/" + algorithm_name(alg) + ".alg";
      save_algorithm(alg, path);
      std::cout << path << "\n";
    } catch (const std::exception& e) {
      std::cerr << spec << ": " << e.what() << "\n";
      ++failures;
    }
  }
  return failures == 0 ? 0 : 1;
}
