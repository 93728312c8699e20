// qorep: build, verify, classify, and export representation matrices.
//
// Exit codes: 0 = success / all checks pass, 1 = a numerical check failed,
// 2 = usage or parameter error.
//
// Environment: QOREP_TOL overrides the relative residual tolerance
// (tol_zero is lowered to match when the override is tighter).

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include "qorep/gtrep.hpp"
#include "qorep/io.hpp"
#include "qorep/qarith.hpp"
#include "qorep/so22.hpp"
#include "qorep/verify.hpp"
#include "qorep/xdiag.hpp"

using namespace qorep;

namespace {

QContext make_ctx(double q) {
  double tol_rel = 1e-10, tol_zero = 1e-12;
  if (const char* env = std::getenv("QOREP_TOL")) {
    tol_rel = std::stod(env);
    tol_zero = std::min(tol_zero, tol_rel);
  }
  return QContext(q, tol_rel, tol_zero);
}

// Complex CLI syntax: "a", "a+bi", "a-bi", optionally followed by the exact
// lattice shift "+pi/2h" (evaluated with the session's q).
Complex parse_complex(std::string s, const QContext& ctx) {
  std::erase(s, ' ');
  double shift = 0.0;
  const std::string suffix = "+pi/2h";
  if (s.size() > suffix.size() &&
      s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0) {
    shift = ctx.im_quarter();
    s = s.substr(0, s.size() - suffix.size());
  }
  size_t pos = 0;
  double re = std::stod(s, &pos);
  double im = 0.0;
  if (pos < s.size()) {
    std::string rest = s.substr(pos);
    if (rest.back() != 'i')
      throw CLI::ValidationError("complex", "cannot parse complex value: " + s);
    rest.pop_back();
    if (rest == "+" || rest == "-") rest += "1";
    im = std::stod(rest);
  }
  return {re, im + shift};
}

Half parse_half(double v, const char* name) {
  double tw = 2.0 * v;
  if (std::abs(tw - std::round(tw)) > 1e-9)
    throw CLI::ValidationError(name, "must be a half-integer");
  return Half::nearest(v);
}

struct BuildFlags {
  std::string family;
  double q = 1.3;
  double l = 0, r = 0, s = 0, K = 8;
  int eps = 0;
  std::string b = "0.5", c = "0.5", tag;
};

void add_build_flags(CLI::App* cmd, BuildFlags& f, bool with_family) {
  if (with_family)
    cmd->add_option("family", f.family,
                    "so3 | so4 | so4x | so22 | so22primed | ladder")
        ->required();
  cmd->add_option("--q", f.q, "deformation parameter (positive, != 1)");
  cmd->add_option("--l", f.l, "so3 spin l");
  cmd->add_option("--r", f.r, "so4 highest weight r");
  cmd->add_option("--s", f.s, "so4 highest weight s");
  cmd->add_option("--eps", f.eps, "so22 parity (0 or 1)");
  cmd->add_option("--b", f.b, "so22 parameter b (a+bi, optional +pi/2h)");
  cmd->add_option("--c", f.c, "so22 parameter c (a+bi, optional +pi/2h)");
  cmd->add_option("--K,--window", f.K, "so22 window radius");
  cmd->add_option("--tag", f.tag,
                  "ladder tag: D0 F0 Q0 Qplus Qminus R0 Rplus Rminus");
}

LadderTag parse_tag(const std::string& s) {
  if (s == "D0") return LadderTag::D0;
  if (s == "F0") return LadderTag::F0;
  if (s == "Q0") return LadderTag::Q0;
  if (s == "Qplus") return LadderTag::Qplus;
  if (s == "Qminus") return LadderTag::Qminus;
  if (s == "R0") return LadderTag::R0;
  if (s == "Rplus") return LadderTag::Rplus;
  if (s == "Rminus") return LadderTag::Rminus;
  throw CLI::ValidationError("tag", "unknown ladder tag: " + s);
}

GenMatrixSet build_set(const BuildFlags& f, const QContext& ctx) {
  if (f.family == "so3") return so3_rep(parse_half(f.l, "l"), ctx);
  if (f.family == "so4")
    return so4_rep(parse_half(f.r, "r"), parse_half(f.s, "s"), ctx);
  if (f.family == "so4x")
    return so4_rep_xbasis(parse_half(f.r, "r"), parse_half(f.s, "s"), ctx);
  RepParams p{f.eps, parse_complex(f.b, ctx), parse_complex(f.c, ctx)};
  if (f.family == "so22") return so22_rep(p, f.K, ctx);
  if (f.family == "so22primed") return so22_rep_primed(p, f.K, ctx);
  if (f.family == "ladder") return ladder_rep(parse_tag(f.tag), p, f.K, ctx);
  throw CLI::ValidationError("family", "unknown family: " + f.family);
}

int cmd_rep(const BuildFlags& f, const std::string& out_path) {
  QContext ctx = make_ctx(f.q);
  GenMatrixSet M = build_set(f, ctx);
  std::cout << "family " << M.meta.family << ", dimension " << M.dim()
            << ", generators";
  for (const auto& [name, A] : M.matrices) std::cout << " " << name;
  std::cout << "\n";
  if (!out_path.empty()) {
    write_matrix_file(M, out_path);
    std::cout << "wrote " << out_path << "\n";
  }
  return 0;
}

int cmd_verify(const BuildFlags& f, const std::string& file,
               const std::string& checks_csv) {
  GenMatrixSet M;
  double q = f.q;
  if (!file.empty()) {
    M = read_matrix_file(file);
    q = M.meta.q;
  }
  QContext ctx = make_ctx(q);
  if (file.empty()) M = build_set(f, ctx);

  bool windowed = M.meta.family.rfind("so22", 0) == 0;
  Restriction rest;
  if (windowed) {
    double K = M.meta.params_real.count("K") ? M.meta.params_real.at("K") : 0.0;
    rest = interior_restriction(M.basis, K, 3.0);
  }
  std::vector<std::string> checks;
  {
    std::stringstream ss(checks_csv);
    std::string item;
    while (std::getline(ss, item, ',')) checks.push_back(item);
  }
  auto want = [&](const std::string& c) {
    return checks_csv == "all" ||
           std::find(checks.begin(), checks.end(), c) != checks.end();
  };
  std::vector<ResidualReport> reports;
  auto add = [&](const std::vector<ResidualReport>& rs, const std::string& where) {
    for (auto r : rs) {
      r.name = where + ":" + r.name;
      reports.push_back(r);
    }
  };
  if (want("serre")) {
    if (M.has("I21") && M.has("I32"))
      add(check_serre(M.at("I21"), M.at("I32"), ctx, rest), "I21/I32");
    if (M.has("I32") && M.has("I43"))
      add(check_serre(M.at("I32"), M.at("I43"), ctx, rest), "I32/I43");
  }
  if (want("commute") && M.has("I21") && M.has("I43"))
    add({check_commute(M.at("I21"), M.at("I43"), ctx, rest)}, "I21/I43");
  if (want("bilinear") && M.has("I21") && M.has("I32") && M.has("I31"))
    add(check_so3_bilinear(M.at("I21"), M.at("I32"), M.at("I31"), ctx, rest),
        "I21/I32/I31");
  if (want("star")) {
    if (windowed) {
      add(check_star(M, ctx, rest), "star");
    } else {
      // Compact real form: every generator is skew-Hermitian.
      for (const char* g : {"I21", "I32", "I43"}) {
        if (!M.has(g)) continue;
        Matrix A = compress(M.at(g), rest);
        ResidualReport rr;
        rr.name = std::string(g) + "* = -" + g;
        rr.residual = op_norm(A + A.adjoint()) / std::max(op_norm(A), 1e-300);
        rr.passed = rr.residual <= ctx.tol_rel;
        rr.restriction = rest.desc;
        add({rr}, "star");
      }
    }
  }

  bool all_pass = true;
  for (const auto& r : reports) {
    std::cout << (r.passed ? "PASS" : "FAIL") << " " << r.name << " residual "
              << r.residual << " (" << r.restriction << ")\n";
    all_pass = all_pass && r.passed;
  }
  std::cout << (all_pass ? "OK" : "FAILED") << " (" << reports.size()
            << " checks)\n";
  return all_pass ? 0 : 1;
}

int cmd_spectrum(double q, double r, double s, std::optional<double> m,
                 const std::string& csv_path) {
  QContext ctx = make_ctx(q);
  Half rh = parse_half(r, "r"), sh = parse_half(s, "s");
  std::vector<Half> ms;
  if (m)
    ms.push_back(parse_half(*m, "m"));
  else
    for (Half mm = -rh; mm <= rh; mm = mm + 1) ms.push_back(mm);
  std::ostringstream csv;
  csv << "m,x,q_number_x\n";
  std::cout << "m\tx\t[x]\n";
  for (Half mm : ms) {
    SpectrumResult sp = spectrum_on_Vm(rh, sh, mm, ctx);
    for (size_t i = 0; i < sp.x_labels.size(); ++i) {
      std::cout << mm.val() << "\t" << sp.x_labels[i].val() << "\t"
                << sp.eigenvalues[i] << "\n";
      char buf[96];
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", mm.val(),
                    sp.x_labels[i].val(), sp.eigenvalues[i]);
      csv << buf;
    }
  }
  if (!csv_path.empty()) {
    std::ofstream out(csv_path, std::ios::binary);
    out << csv.str();
  }
  return 0;
}

const char* t2name(Theorem2Class c) {
  switch (c) {
    case Theorem2Class::Irreducible: return "irreducible (class a)";
    case Theorem2Class::D: return "D-family (Case 1)";
    case Theorem2Class::F: return "F-family (Case 2)";
    case Theorem2Class::Q: return "Q-family (Case 3)";
    case Theorem2Class::R: return "R-family (Case 4)";
    case Theorem2Class::E: return "E-family (Case 5)";
  }
  return "?";
}

int cmd_classify(double q, int eps, const std::string& bs,
                 const std::string& cs, double K) {
  QContext ctx = make_ctx(q);
  RepParams p{eps, parse_complex(bs, ctx), parse_complex(cs, ctx)};
  ClassificationReport rep = decompose(p, K, ctx);
  std::cout << "canonical b = " << rep.params.b << ", c = " << rep.params.c
            << ", eps = " << rep.params.epsilon << "\n";
  std::cout << (rep.irreducible ? "irreducible" : "reducible") << "; "
            << t2name(rep.theorem2_class) << "\n";
  if (rep.star_series)
    std::cout << "star series: Theorem 3 class (" << *rep.star_series << ")\n";
  else
    std::cout << "star series: none\n";
  for (const auto& c : rep.components) {
    std::cout << "  " << c.label << "  [" << c.region << "]  dim "
              << c.indices.size();
    if (c.empty) {
      std::cout << "  (empty)";
    } else {
      std::cout << "  leakage " << c.leakage;
      if (c.star_class != 0)
        std::cout << "  star class (" << c.star_class << ") "
                  << (c.star ? "certified" : "FAILED") << " residual "
                  << c.star_residual;
    }
    if (c.label == "E00") std::cout << "  (finite dimensional)";
    std::cout << "\n";
  }
  for (const auto& n : rep.notes) std::cout << "  note: " << n << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qorep: q-deformed so(3)/so(4)/so(2,2) representation matrices"};
  app.require_subcommand(1);

  BuildFlags rep_flags;
  std::string rep_out;
  CLI::App* rep = app.add_subcommand("rep", "construct a representation");
  add_build_flags(rep, rep_flags, true);
  rep->add_option("--out", rep_out, "write MatrixFile JSON here");

  BuildFlags ver_flags;
  std::string ver_file, ver_checks = "all";
  CLI::App* ver = app.add_subcommand("verify", "run numerical certification");
  add_build_flags(ver, ver_flags, false);
  ver->add_option("--family", ver_flags.family, "construct instead of --file");
  ver->add_option("--file", ver_file, "MatrixFile to verify");
  ver->add_option("--checks", ver_checks, "comma list: serre,commute,bilinear,star");

  double sq = 1.3, sr = 1, ss = 0;
  std::optional<double> sm;
  std::string s_csv;
  CLI::App* spec = app.add_subcommand("spectrum", "Eq.-(20) spectrum table");
  spec->add_option("--q", sq);
  spec->add_option("--r", sr)->required();
  spec->add_option("--s", ss)->required();
  double sm_val = 0;
  CLI::Option* sm_opt = spec->add_option("--m", sm_val, "single m (default: all m)");
  spec->add_option("--csv", s_csv, "also write CSV here");

  double cq = 1.1, cK = 8;
  int ceps = 0;
  std::string cb = "0.5", cc = "0.5";
  CLI::App* cls = app.add_subcommand("classify", "Theorems 1-3 classification");
  cls->add_option("--q", cq);
  cls->add_option("--eps", ceps);
  cls->add_option("--b", cb)->required();
  cls->add_option("--c", cc)->required();
  cls->add_option("--K", cK);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*rep) return cmd_rep(rep_flags, rep_out);
    if (*ver) return cmd_verify(ver_flags, ver_file, ver_checks);
    if (*spec) {
      if (*sm_opt) sm = sm_val;
      return cmd_spectrum(sq, sr, ss, sm, s_csv);
    }
    if (*cls) return cmd_classify(cq, ceps, cb, cc, cK);
  } catch (const InvalidParameter& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
