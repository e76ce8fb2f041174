#include "routinelog/encoding.hpp"

#include <ostream>
#include <string>

namespace routinelog {

std::vector<FeatureMatrix::Count> count_vector(std::span<const Action> actions, std::size_t dims) {
  std::vector<FeatureMatrix::Count> v(dims, 0);
  for (Action a : actions) {
    if (a >= dims) throw Error("action index " + std::to_string(a) + " outside the alphabet");
    ++v[a];
  }
  return v;
}

FeatureMatrix encode(const ExecutionMultiset& executions, const ActionAlphabet& alphabet) {
  FeatureMatrix m(executions.size(), alphabet.size());
  for (std::size_t j = 0; j < executions.size(); ++j) {
    auto row = m.row(j);
    for (Action a : executions[j].actions) {
      if (a >= alphabet.size()) {
        throw Error("execution " + std::to_string(j) + " uses action index " +
                    std::to_string(a) + " outside the alphabet");
      }
      ++row[a];
    }
  }
  return m;
}

void write_matrix_csv(std::ostream& out, const FeatureMatrix& m, const ActionAlphabet& alphabet) {
  for (std::size_t j = 0; j < alphabet.size(); ++j) {
    if (j) out << ',';
    out << alphabet.label(static_cast<Action>(j));
  }
  out << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << m.at(i, j);
    }
    out << '\n';
  }
}

}  // namespace routinelog
