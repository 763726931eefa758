#include "utm_cli/emit.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "utm/errors.hpp"

namespace utm::cli {

std::string format_real(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_solution_csv(std::ostream& out, const SolutionField& field) {
  out << "x,t,re_q,im_q\n";
  for (size_t ix = 0; ix < field.nx(); ++ix)
    for (size_t it = 0; it < field.nt(); ++it) {
      const cplx q = field.at(ix, it);
      out << format_real(field.x[ix]) << ',' << format_real(field.t[it]) << ',' << format_real(q.real()) << ','
          << format_real(q.imag()) << '\n';
    }
}

std::string solution_csv(const SolutionField& field) {
  std::ostringstream os;
  write_solution_csv(os, field);
  return os.str();
}

std::vector<CsvRow> read_solution_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "x,t,re_q,im_q") raise(ErrorKind::Io, "csv: missing header x,t,re_q,im_q");
  std::vector<CsvRow> rows;
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    double v[4];
    std::istringstream ls(line);
    std::string cell;
    int n = 0;
    while (n < 4 && std::getline(ls, cell, ',')) {
      size_t used = 0;
      try {
        v[n] = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != cell.size())
        raise(ErrorKind::Io, "csv line " + std::to_string(lineno) + ": bad number '" + cell + "'");
      ++n;
    }
    if (n != 4 || std::getline(ls, cell, ','))
      raise(ErrorKind::Io, "csv line " + std::to_string(lineno) + ": expected 4 columns");
    rows.push_back({v[0], v[1], cplx(v[2], v[3])});
  }
  return rows;
}

std::vector<EigenRecord> eigen_records(const std::vector<EigenPair>& pairs, size_t count) {
  std::vector<EigenRecord> out;
  for (const EigenPair& p : pairs) {
    // A double zero at the origin of the reduced variable is one eigenvalue.
    const int copies = p.multiplicity == 2 && std::abs(p.kk) > 1e-6 ? 2 : 1;
    for (int c = 0; c < copies && out.size() < count; ++c)
      out.push_back({static_cast<int>(out.size()), p.kappa, p.lambda, p.residual, p.N_used});
  }
  return out;
}

std::string eigen_json(const std::vector<EigenRecord>& records) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["m"] = r.m;
    j["kappa_re"] = r.kappa.real();
    j["kappa_im"] = r.kappa.imag();
    j["lambda_re"] = r.lambda.real();
    j["lambda_im"] = r.lambda.imag();
    j["residual"] = r.residual;
    j["n_truncation"] = r.n_truncation;
    arr.push_back(j);
  }
  return arr.dump(2) + "\n";
}

void write_file(const std::string& dir, const std::string& name, const std::string& text) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) raise(ErrorKind::Io, "cannot create directory '" + dir + "': " + ec.message());
  const std::string path = (std::filesystem::path(dir) / name).string();
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorKind::Io, "cannot write '" + path + "'");
  out << text;
  if (!out) raise(ErrorKind::Io, "write failed for '" + path + "'");
}

}  // namespace utm::cli
