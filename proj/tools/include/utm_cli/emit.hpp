#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "utm/eigen.hpp"
#include "utm/solver.hpp"

namespace utm::cli {

// 17 significant digits, round-trips doubles exactly.
std::string format_real(double v);

// Header `x,t,re_q,im_q`, x-major rows, LF line endings.
void write_solution_csv(std::ostream& out, const SolutionField& field);
std::string solution_csv(const SolutionField& field);

struct CsvRow {
  double x, t;
  cplx q;
};
// Reads back what write_solution_csv produced.
std::vector<CsvRow> read_solution_csv(std::istream& in);

// One record per eigenvalue counted with multiplicity, ordered as found, m = 0, 1, ...
struct EigenRecord {
  int m = 0;
  cplx kappa, lambda;
  double residual = 0.0;
  int n_truncation = 0;
};
std::vector<EigenRecord> eigen_records(const std::vector<EigenPair>& pairs, size_t count);
std::string eigen_json(const std::vector<EigenRecord>& records);

// Writes text to dir/name, creating dir.
void write_file(const std::string& dir, const std::string& name, const std::string& text);

}  // namespace utm::cli
