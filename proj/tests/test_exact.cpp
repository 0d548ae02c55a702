#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mirrorsmith/matrix.hpp"
#include "mirrorsmith/smith.hpp"

using namespace mirrorsmith;

static Scalar q(long num, long den = 1) {
  return Scalar::rational(BigRat(num, den));
}

TEST_CASE("field arithmetic over F_p") {
  Field f5 = Field::prime(5);
  Scalar a = Scalar::from_int(f5, 3), b = Scalar::from_int(f5, 4);
  CHECK((a + b).residue() == 2);
  CHECK((a * b).residue() == 2);
  CHECK((a - b).residue() == 4);
  CHECK((a / b).residue() == 2);  // 3 * 4^-1 = 3*4 = 12 = 2
  CHECK(a.inverse().residue() == 2);
  CHECK((-a).residue() == 2);
  CHECK(Scalar::from_int(f5, 10).is_zero());
  CHECK_THROWS_AS(Scalar::zero(f5).inverse(), Error);
}

TEST_CASE("field arithmetic over Q") {
  Scalar a = q(1, 3), b = q(1, 6);
  CHECK((a + b).rat() == BigRat(1, 2));
  CHECK((a * b).rat() == BigRat(1, 18));
  CHECK((a / b).rat() == BigRat(2));
  CHECK(q(-4, 8).rat() == BigRat(-1, 2));
  CHECK(q(7).str() == "7");
  CHECK(q(1, 3).str() == "1/3");
  CHECK_THROWS_AS(q(1) / q(0), Error);
}

TEST_CASE("mixed fields rejected") {
  CHECK_THROWS_AS(Scalar::from_int(Field::prime(5), 1) + Scalar::from_int(Field::prime(7), 1),
                  Error);
  CHECK_THROWS_AS(Field::prime(6), Error);
  CHECK_THROWS_AS(Field::prime(1), Error);
}

TEST_CASE("rref and rank") {
  Field f = Field::rationals();
  Matrix m = Matrix::from_rows(f,
                               {{q(1), q(2), q(3)}, {q(2), q(4), q(6)}, {q(1), q(0), q(1)}}, 3);
  RrefResult r = rref(m);
  CHECK(r.rank == 2);
  CHECK(r.pivots == std::vector<std::size_t>{0, 1});
  CHECK(rank(Matrix::identity(f, 4)) == 4);
  CHECK(rank(Matrix(f, 3, 3)) == 0);
}

TEST_CASE("kernel basis canonical form") {
  Field f = Field::rationals();
  // x + 2y + 3z = 0 -> pivots {0}, free {1,2}
  Matrix m = Matrix::from_rows(f, {{q(1), q(2), q(3)}}, 3);
  auto kb = kernel_basis(m);
  REQUIRE(kb.size() == 2);
  CHECK(kb[0] == Vec{q(-2), q(1), q(0)});
  CHECK(kb[1] == Vec{q(-3), q(0), q(1)});
  for (const auto& v : kb) CHECK(vec_is_zero(m.apply(v)));
}

TEST_CASE("solve, inverse, determinant") {
  Field f7 = Field::prime(7);
  auto s = [&](long v) { return Scalar::from_int(f7, v); };
  Matrix m = Matrix::from_rows(f7, {{s(2), s(1)}, {s(1), s(1)}}, 2);
  auto sol = solve_linear(m, {s(3), s(2)});
  REQUIRE(sol.has_value());
  CHECK(m.apply(*sol) == Vec{s(3), s(2)});
  CHECK(is_invertible(m));
  auto mi = inverse(m);
  REQUIRE(mi.has_value());
  CHECK(*mi * m == Matrix::identity(f7, 2));
  CHECK(determinant(m) == s(1));
  Matrix sing = Matrix::from_rows(f7, {{s(1), s(2)}, {s(2), s(4)}}, 2);
  CHECK(!is_invertible(sing));
  CHECK(determinant(sing).is_zero());
  CHECK(!solve_linear(sing, {s(1), s(0)}).has_value());
}

TEST_CASE("subspace insert/contains stays reduced") {
  Field f = Field::rationals();
  Subspace s(f, 3);
  CHECK(s.insert({q(1), q(1), q(0)}));
  CHECK(!s.insert({q(2), q(2), q(0)}));
  CHECK(s.insert({q(0), q(1), q(1)}));
  CHECK(s.dim() == 2);
  CHECK(s.contains({q(1), q(0), q(-1)}));
  CHECK(!s.contains({q(0), q(0), q(1)}));
  // reduced echelon basis rows
  CHECK(s.basis()[0] == Vec{q(1), q(0), q(-1)});
  CHECK(s.basis()[1] == Vec{q(0), q(1), q(1)});
}

TEST_CASE("quotient space: proj then sect is identity on classes") {
  Field f = Field::prime(5);
  auto s = [&](long v) { return Scalar::from_int(f, v); };
  Subspace sub(f, 3);
  sub.insert({s(1), s(2), s(0)});
  QuotientSpace qs = quotient_space(sub);
  REQUIRE(qs.coords.size() == 2);
  Matrix ps = qs.proj * qs.sect;
  CHECK(ps == Matrix::identity(f, 2));
  // projection kills the subspace
  CHECK(vec_is_zero(qs.proj.apply({s(1), s(2), s(0)})));
}

TEST_CASE("smith normal form oracles") {
  IntMatrix m(2, 2);
  m.at(0, 0) = 3; m.at(0, 1) = 1;
  m.at(1, 0) = 1; m.at(1, 1) = 1;
  SmithResult s = smith_normal_form(m);
  CHECK(s.invariant_factors() == std::vector<BigInt>{1, 2});
  CHECK(s.left * m * s.right == s.d);
  CHECK(int_determinant(m) == 2);

  IntMatrix b(2, 2);
  b.at(0, 0) = 3; b.at(0, 1) = 2;
  b.at(1, 0) = 2; b.at(1, 1) = 2;
  CHECK(smith_normal_form(b).invariant_factors() == std::vector<BigInt>{1, 2});
  CHECK(int_determinant(b) == 2);

  IntMatrix z(2, 3);
  SmithResult sz = smith_normal_form(z);
  CHECK(sz.invariant_factors().empty());
  CHECK(sz.left * z * sz.right == sz.d);

  IntMatrix c(3, 3);
  c.at(0, 0) = 2; c.at(1, 1) = 6; c.at(2, 2) = 10;
  SmithResult sc = smith_normal_form(c);
  CHECK(sc.invariant_factors() == std::vector<BigInt>{2, 2, 30});
  CHECK(sc.left * c * sc.right == sc.d);
}

TEST_CASE("smith divisor chain on random-ish integer matrices") {
  IntMatrix m(3, 4);
  int vals[3][4] = {{4, -6, 10, 2}, {3, 7, -1, 0}, {8, 2, 2, 2}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j) m.at(i, j) = vals[i][j];
  SmithResult s = smith_normal_form(m);
  CHECK(s.left * m * s.right == s.d);
  auto inv = s.invariant_factors();
  for (std::size_t i = 0; i + 1 < inv.size(); ++i) {
    CHECK(inv[i] > 0);
    CHECK(inv[i + 1] % inv[i] == 0);
  }
}

TEST_CASE("integer row lattice membership") {
  IntMatrix m(2, 2);
  m.at(0, 0) = 2; m.at(0, 1) = 0;
  m.at(1, 0) = 0; m.at(1, 1) = 3;
  CHECK(in_row_lattice(m, {4, 3}));
  CHECK(in_row_lattice(m, {-2, 6}));
  CHECK(!in_row_lattice(m, {1, 0}));
  CHECK(!in_row_lattice(m, {0, 1}));
  IntMatrix u(2, 2);
  u.at(0, 0) = 1; u.at(0, 1) = 1;
  u.at(1, 0) = 0; u.at(1, 1) = 1;
  CHECK(in_row_lattice(u, {5, -7}));
}
