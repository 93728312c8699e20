#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "qorep/gtrep.hpp"
#include "qorep/io.hpp"
#include "qorep/so22.hpp"

using namespace qorep;

TEST_CASE("MatrixFile: bit-exact round trip for every family") {
  QContext ctx(1.2345678901234567);
  std::vector<GenMatrixSet> sets;
  sets.push_back(so4_rep(Half::whole(2), Half::whole(1), ctx));
  sets.push_back(so22_rep_primed({0, Complex(0.5, 0.8), Complex(1.3, -0.2)},
                                 3.0, ctx));
  for (const GenMatrixSet& M : sets) {
    std::string text = serialize_matrix_file(M);
    GenMatrixSet R = parse_matrix_file(text);
    CHECK(R.meta.family == M.meta.family);
    CHECK(R.meta.q == M.meta.q);  // exact, not approximate
    REQUIRE(R.dim() == M.dim());
    for (int i = 0; i < M.dim(); ++i) {
      CHECK(R.basis[i].a == M.basis[i].a);
      CHECK(R.basis[i].b == M.basis[i].b);
      CHECK(R.basis[i].kind == M.basis[i].kind);
    }
    for (const auto& [name, A] : M.matrices) {
      REQUIRE(R.has(name));
      for (int i = 0; i < M.dim(); ++i)
        for (int j = 0; j < M.dim(); ++j)
          CHECK(R.at(name)(i, j) == A(i, j));  // bit-exact
    }
    for (const auto& [k, v] : M.meta.params_complex)
      CHECK(R.meta.params_complex.at(k) == v);
    CHECK(R.meta.nonreal_entries == M.meta.nonreal_entries);
  }
}

TEST_CASE("MatrixFile: serialization is deterministic") {
  QContext ctx(1.3);
  GenMatrixSet M = so4_rep(Half::whole(2), Half::whole(0), ctx);
  CHECK(serialize_matrix_file(M) == serialize_matrix_file(M));
  // independent rebuild produces the identical byte stream
  GenMatrixSet M2 = so4_rep(Half::whole(2), Half::whole(0), QContext(1.3));
  CHECK(serialize_matrix_file(M) == serialize_matrix_file(M2));
}

TEST_CASE("MatrixFile: file round trip and error paths") {
  QContext ctx(1.4);
  GenMatrixSet M = so3_rep(Half::whole(1), ctx);
  std::string path =
      (std::filesystem::temp_directory_path() / "qorep_io_test.json").string();
  write_matrix_file(M, path);
  GenMatrixSet R = read_matrix_file(path);
  CHECK(serialize_matrix_file(R) == serialize_matrix_file(M));
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_matrix_file("/nonexistent/qorep.json"), InvalidParameter);
  // version check
  std::string text = serialize_matrix_file(M);
  std::string bad = text;
  bad.replace(bad.find("\"format_version\": 1"),
              std::string("\"format_version\": 1").size(),
              "\"format_version\": 99");
  CHECK_THROWS_AS(parse_matrix_file(bad), InvalidParameter);
}
