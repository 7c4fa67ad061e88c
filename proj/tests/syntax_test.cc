#include "doctest.h"
#include "fixtures.h"

#include "dam/analysis.h"
#include "dam/errors.h"
#include "dam/gadgets.h"
#include "dam/syntax.h"

using namespace dam;

namespace {

Formula nom(const char* n) { return Formula::nominal(n); }

RationalTerm term(Rational c, const char* name) { return {c, Subject::named(name)}; }

Formula rel(std::vector<RationalTerm> t, Comparison op, Rational z) {
  return Formula::relation(std::move(t), op, z);
}

}  // namespace

TEST_CASE("one-seller formula") {
  const Formula f = parse_surface(
      "ut[sigma] = 7 & wins(beta) & <sigma:alpha>(ut[sigma] = 9 & wins(gamma))");
  const Formula expected = Formula::conjunction(
      Formula::conjunction(rel({term(Rational(1), "sigma")}, Comparison::eq, Rational(7)),
                           Formula::heart(Subject::named("beta"))),
      Formula::diffuse_diamond(
          {{"sigma", "alpha"}},
          Formula::conjunction(rel({term(Rational(1), "sigma")}, Comparison::eq, Rational(9)),
                               Formula::heart(Subject::named("gamma")))));
  CHECK(f == expected);
}

TEST_CASE("constructor mapping") {
  CHECK(parse_formula("[] (ut[@self] >= 5)") ==
        Formula::box(Formula::linear_geq({{1, Subject::self()}}, 5)));
  CHECK(parse_formula("ut[alpha] >= 1/2") ==
        Formula::linear_geq({{2, Subject::named("alpha")}}, 1));
  CHECK(parse_surface("wins(@self)") == Formula::heart(Subject::self()));
  CHECK(parse_surface("true") == Formula::constant(true));
  CHECK(parse_surface("false") == Formula::constant(false));
}

TEST_CASE("sums move to the left") {
  CHECK(parse_surface("2*ut[a] - ut[b] + 1 >= ut[c] - 3") ==
        rel({term(Rational(2), "a"), term(Rational(-1), "b"), term(Rational(-1), "c")},
            Comparison::ge, Rational(-4)));
  CHECK(parse_surface("-ut[a] < -1/2*ut[b]") ==
        rel({term(Rational(-1), "a"), term(Rational(1, 2), "b")}, Comparison::lt, Rational(0)));
  CHECK(parse_surface("3 <= ut[a]") ==
        rel({term(Rational(-1), "a")}, Comparison::le, Rational(-3)));
  CHECK(parse_surface("ut[x]>1") == rel({term(Rational(1), "x")}, Comparison::gt, Rational(1)));
}

TEST_CASE("precedence") {
  const Formula p = nom("p"), q = nom("q"), r = nom("r");
  CHECK(parse_surface("p | q & r") == Formula::disjunction(p, Formula::conjunction(q, r)));
  CHECK(parse_surface("p & q | r") == Formula::disjunction(Formula::conjunction(p, q), r));
  CHECK(parse_surface("p -> q -> r") ==
        Formula::implication(p, Formula::implication(q, r)));
  CHECK(parse_surface("p <-> q <-> r") ==
        Formula::equivalence(Formula::equivalence(p, q), r));
  CHECK(parse_surface("p -> q <-> r") ==
        Formula::equivalence(Formula::implication(p, q), r));
  CHECK(parse_surface("p | q -> r") ==
        Formula::implication(Formula::disjunction(p, q), r));
  CHECK(parse_surface("!p & q") == Formula::conjunction(Formula::negation(p), q));
  CHECK(parse_surface("[] p & q") == Formula::conjunction(Formula::box(p), q));
  CHECK(parse_surface("<> !p") == Formula::diamond(Formula::negation(p)));
  CHECK(parse_surface("((p))") == p);
}

TEST_CASE("modalities") {
  const Formula p = nom("p");
  CHECK(parse_surface("[s1:a, s2:skip] p") ==
        Formula::diffuse({{"s1", "a"}, {"s2", std::nullopt}}, p));
  CHECK(parse_surface("<s1:a> p") == Formula::diffuse_diamond({{"s1", "a"}}, p));
  CHECK(parse_surface("[< s1, s2 >] p") == Formula::coalition_box({"s1", "s2"}, p));
  CHECK(parse_surface("<[ s2 ]> p") == Formula::coalition_diamond({"s2"}, p));
  CHECK(parse_surface("[<>] p") == Formula::coalition_box({}, p));
  CHECK(parse_surface("<[]> p") == Formula::coalition_diamond({}, p));
  CHECK(parse_surface("[ ] p") == Formula::box(p));
  CHECK(parse_surface("<s:a><s:b>p") ==
        Formula::diffuse_diamond({{"s", "a"}}, Formula::diffuse_diamond({{"s", "b"}}, p)));
}

TEST_CASE("syntax errors carry a position") {
  try {
    parse_surface("p &\n  & q");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 3);
  }
  for (const char* bad : {"", "(p", "p)", "p q", "ut[]", "ut[a] >=", "wins()",
                          "[s:] p", "[s:a p", "<[s> p", "skip", "2", "p & # q",
                          "[<s]> p", "ut[a] >= 1/0"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_surface(bad), SyntaxError);
  }
}

TEST_CASE("seller positions are checked") {
  ParseOptions opts;
  opts.seller_names = std::set<std::string>{"s1", "s2"};
  CHECK_NOTHROW(parse_surface("[s1:a, s2:skip] p", opts));
  CHECK_THROWS_AS(parse_surface("[a:b] p", opts), ArityError);
  CHECK_THROWS_AS(parse_surface("[<s1, a>] p", opts), ArityError);
  CHECK_THROWS_AS(parse_surface("[s1:a, s1:b] p", opts), ArityError);
  CHECK_THROWS_AS(parse_surface("[s1:a, s1:b] p"), ArityError);
}

TEST_CASE("printing") {
  CHECK(format_formula(parse_surface("p & q & r")) == "(p & q & r)");
  CHECK(format_formula(parse_surface("p | q & r")) == "(p | (q & r))");
  CHECK(format_formula(parse_surface("p -> q -> r")) == "(p -> q -> r)");
  CHECK(format_formula(parse_surface("(p -> q) -> r")) == "((p -> q) -> r)");
  CHECK(format_formula(parse_surface("[s1:a, s2:skip] !p")) == "[s1:a, s2:skip] !p");
  CHECK(format_formula(parse_surface("<[]> [<s1,s2>] [] <> p")) == "<[]> [<s1, s2>] [] <> p");
  CHECK(format_formula(parse_surface("ut[@self] - 1/2*ut[a] >= 3")) ==
        "ut[@self] + -1/2*ut[a] >= 3");
  CHECK(format_formula(parse_formula("ut[a] < 2")) == "!ut[a] >= 2");
  CHECK(format_formula(parse_formula("true")) == "true");
  CHECK(format_formula(Formula::linear_geq({}, 3)) == "0 >= 3");
}

TEST_CASE("round trip on the one-seller formula") {
  const Formula f = parse_formula(
      "ut[sigma] = 7 & wins(beta) & <sigma:alpha>(ut[sigma] = 9 & wins(gamma))");
  CHECK(parse_formula(format_formula(f)) == f);
}

TEST_CASE("round trip on generated formulas") {
  CnfInstance c;
  c.num_vars = 4;
  c.clauses = {{1, 2, 3}, {-1, 3, -4}};
  const GadgetInstance sat = gen_sat_gadget(c);
  CHECK(parse_formula(format_formula(sat.formula)) == desugar(sat.formula));

  const Mechanism m = dam::testing::two_sellers();
  const Formula t = translate(m, parse_surface("<[sigma1]> [sigma2:gamma] ut[sigma1] > 1"));
  CHECK(parse_formula(format_formula(t)) == desugar(t));
  CHECK(parse_surface(format_formula(t)) == t);
}

TEST_CASE("round trip on random formulas") {
  std::mt19937 rng(17);
  for (int i = 0; i < 1000; ++i) {
    const Mechanism m = dam::testing::random_mechanism(rng);
    const Formula f = dam::testing::random_formula(
        rng, m, {.modal_depth = 3, .size = 12, .coalitions = true});
    const std::string text = format_formula(f);
    CAPTURE(text);
    CHECK(parse_surface(text) == f);
    CHECK(parse_formula(text) == desugar(f));
    const Formula d = desugar(f);
    CHECK(parse_formula(format_formula(d)) == d);
  }
}
