#include "qorep/io.hpp"

#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

namespace qorep {

namespace {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

std::string num17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

ordered complex_json(Complex z) {
  // [re, im] as 17-digit decimal strings so round-trips are bit-exact.
  return ordered::array({num17(z.real()), num17(z.imag())});
}

Complex complex_from(const json& j) {
  return {std::stod(j.at(0).get<std::string>()),
          std::stod(j.at(1).get<std::string>())};
}

std::string kind_name(BasisLabel::Kind k) {
  switch (k) {
    case BasisLabel::Kind::GT: return "gt";
    case BasisLabel::Kind::X: return "x";
    case BasisLabel::Kind::Window: return "window";
  }
  return "gt";
}

BasisLabel::Kind kind_from(const std::string& s) {
  if (s == "gt") return BasisLabel::Kind::GT;
  if (s == "x") return BasisLabel::Kind::X;
  if (s == "window") return BasisLabel::Kind::Window;
  throw InvalidParameter("MatrixFile: unknown basis kind " + s);
}

}  // namespace

std::string serialize_matrix_file(const GenMatrixSet& M) {
  ordered root;
  root["format_version"] = kMatrixFileVersion;
  ordered meta;
  meta["family"] = M.meta.family;
  meta["q"] = num17(M.meta.q);
  ordered pr;  // std::map iteration order is already deterministic
  for (const auto& [k, v] : M.meta.params_real) pr[k] = num17(v);
  meta["params_real"] = pr;
  ordered pc;
  for (const auto& [k, v] : M.meta.params_complex) pc[k] = complex_json(v);
  meta["params_complex"] = pc;
  meta["nonreal_entries"] = M.meta.nonreal_entries;
  meta["basis_order"] = "gt: l asc, m asc; x: m asc, x desc; window: k asc, l asc";
  root["meta"] = meta;
  ordered basis = ordered::array();
  for (const auto& lb : M.basis)
    basis.push_back(ordered::array(
        {kind_name(lb.kind), lb.a.tw, lb.b.tw}));  // labels as twice-values
  root["basis"] = basis;
  ordered mats;
  for (const auto& [name, A] : M.matrices) {
    ordered rows = ordered::array();
    for (long i = 0; i < A.rows(); ++i) {
      ordered row = ordered::array();
      for (long j = 0; j < A.cols(); ++j) row.push_back(complex_json(A(i, j)));
      rows.push_back(row);
    }
    mats[name] = rows;
  }
  root["matrices"] = mats;
  return root.dump(1) + "\n";
}

GenMatrixSet parse_matrix_file(const std::string& text) {
  json root = json::parse(text);
  if (root.at("format_version").get<int>() != kMatrixFileVersion)
    throw InvalidParameter("MatrixFile: unsupported format_version");
  GenMatrixSet M;
  const json& meta = root.at("meta");
  M.meta.family = meta.at("family").get<std::string>();
  M.meta.q = std::stod(meta.at("q").get<std::string>());
  for (const auto& [k, v] : meta.at("params_real").items())
    M.meta.params_real[k] = std::stod(v.get<std::string>());
  for (const auto& [k, v] : meta.at("params_complex").items())
    M.meta.params_complex[k] = complex_from(v);
  M.meta.nonreal_entries = meta.value("nonreal_entries", 0);
  for (const auto& lb : root.at("basis"))
    M.basis.push_back({kind_from(lb.at(0).get<std::string>()),
                       Half(lb.at(1).get<int>()), Half(lb.at(2).get<int>())});
  const int n = M.dim();
  for (const auto& [name, rows] : root.at("matrices").items()) {
    Matrix A(n, n);
    if (static_cast<int>(rows.size()) != n)
      throw DimensionMismatch("MatrixFile: matrix " + name + " row count");
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(rows.at(i).size()) != n)
        throw DimensionMismatch("MatrixFile: matrix " + name + " col count");
      for (int j = 0; j < n; ++j) A(i, j) = complex_from(rows.at(i).at(j));
    }
    M.matrices[name] = A;
  }
  return M;
}

void write_matrix_file(const GenMatrixSet& M, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidParameter("cannot open for writing: " + path);
  out << serialize_matrix_file(M);
}

GenMatrixSet read_matrix_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidParameter("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_matrix_file(ss.str());
}

}  // namespace qorep
