#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "otlab/verify.hpp"

using namespace otlab;

namespace {

const ITFunction& fn(const std::string& name) { return *find_it_function(name); }

bool contains(const std::vector<Operation>& ops, const Operation& o) {
  return std::find(ops.begin(), ops.end(), o) != ops.end();
}

Operation ins_env(int pos, Symbol ch, std::vector<int> before,
                  std::vector<int> after) {
  Operation o = Operation::ins(pos, ch);
  o.ext.deleted_before = std::move(before);
  o.ext.deleted_after = std::move(after);
  return o;
}

}  // namespace

TEST_CASE("domain validation") {
  REQUIRE_NOTHROW(validate_domain(OperationDomain{}));
  REQUIRE_THROWS_AS(validate_domain(OperationDomain{-1, "abc", "uvwxyz", 0}),
                    DomainError);
  REQUIRE_THROWS_AS(validate_domain(OperationDomain{3, "", "uvwxyz", 0}),
                    DomainError);
  REQUIRE_THROWS_AS(validate_domain(OperationDomain{3, "abc", "uvwxyz", -1}),
                    DomainError);
  // probe too short for max_pos + 2
  REQUIRE_THROWS_AS(validate_domain(OperationDomain{5, "abc", "uvwxyz", 0}),
                    DomainError);
  // probe symbols must be pairwise distinct and disjoint from the alphabet
  REQUIRE_THROWS_AS(validate_domain(OperationDomain{3, "abc", "uvwxyy", 0}),
                    DomainError);
  REQUIRE_THROWS_AS(validate_domain(OperationDomain{3, "abc", "uvwxya", 0}),
                    DomainError);
}

TEST_CASE("depth-0 enumeration lists fresh operations in sorted order") {
  std::vector<Operation> ops = enumerate_operations(OperationDomain{}, fn("sun"));
  REQUIRE(ops.size() == 16);  // 4 positions x 3 symbols + 4 deletes
  REQUIRE(ops.front() == Operation::del(0));
  REQUIRE(ops.back() == Operation::ins(3, 'c'));
  REQUIRE(std::is_sorted(ops.begin(), ops.end()));
  REQUIRE(contains(ops, Operation::ins(0, 'a')));
  REQUIRE_FALSE(contains(ops, Operation::ins(4, 'a')));
}

TEST_CASE("initial-position enumeration stamps fresh inserts") {
  std::vector<Operation> ops =
      enumerate_operations(OperationDomain{}, fn("imine"));
  REQUIRE(ops.size() == 16);
  for (const Operation& o : ops)
    if (o.is_ins()) REQUIRE(o.ext.initial_pos == o.pos);
}

TEST_CASE("closure depth adds transformed forms and filters ill-formed ones") {
  OperationDomain d1{3, "abc", "uvwxyz", 1};
  std::vector<Operation> sun1 = enumerate_operations(d1, fn("sun"));
  REQUIRE(contains(sun1, Operation::ins(4, 'a')));  // shifted past a fresh insert
  REQUIRE(contains(sun1, Operation::del(4)));
  REQUIRE_FALSE(contains(sun1, Operation::ins(5, 'a')));
  for (const Operation& o : sun1) {
    REQUIRE(o.pos >= 0);
    REQUIRE_FALSE(o.is_nop());
  }

  // the strict insert/delete rule would produce Ins(-1); it must be dropped
  std::vector<Operation> ellis1 =
      enumerate_operations(OperationDomain{3, "abc", "uvwxyz", 1}, fn("ellis"));
  for (const Operation& o : ellis1) REQUIRE(o.pos >= 0);

  // environment sets accumulate through depth
  std::vector<Operation> sul2 =
      enumerate_operations(OperationDomain{1, "abc", "uvw", 2}, fn("suleiman"));
  REQUIRE(contains(sul2, ins_env(0, 'a', {0}, {0})));

  // initial positions survive transformation
  std::vector<Operation> imine1 =
      enumerate_operations(OperationDomain{2, "ce", "uvwx", 1}, fn("imine"));
  REQUIRE(contains(imine1, Operation::ins(1, 'e').with_initial_pos(2)));
}

TEST_CASE("slot assignment stamps only tie-breaking families") {
  REQUIRE(assign_slot(Operation::ins(1, 'a'), ItFamily::Priority, 2) ==
          Operation::ins(1, 'a').with_priority(2));
  REQUIRE(assign_slot(Operation::ins(1, 'a'), ItFamily::SiteId, 1) ==
          Operation::ins(1, 'a').with_site(1));
  REQUIRE(assign_slot(Operation::del(1), ItFamily::Priority, 2) ==
          Operation::del(1));
  REQUIRE(assign_slot(Operation::ins(1, 'a'), ItFamily::Basic, 2) ==
          Operation::ins(1, 'a'));
  REQUIRE(assign_slot(Operation::ins(1, 'a'), ItFamily::AvAp, 2) ==
          Operation::ins(1, 'a'));
}

TEST_CASE("pair evaluation distinguishes the three failure shapes") {
  // state divergence: equal-position inserts both shift up
  Tp1Outcome diverged = evaluate_tp1_instance(
      fn("sun"), Operation::ins(0, 'a'), Operation::ins(0, 'b'), "uvwxyz");
  REQUIRE_FALSE(diverged.pass);
  REQUIRE(diverged.tag == FailTag::StateDivergence);
  REQUIRE(diverged.t21 == Operation::ins(1, 'b'));
  REQUIRE(diverged.t12 == Operation::ins(1, 'a'));
  REQUIRE(doc(diverged.left) == "abuvwxyz");
  REQUIRE(doc(diverged.right) == "bauvwxyz");

  // ill-formed transformed insert
  Tp1Outcome illformed = evaluate_tp1_instance(
      fn("ellis"), Operation::ins(0, 'f').with_priority(1), Operation::del(0),
      "uvwxyz");
  REQUIRE_FALSE(illformed.pass);
  REQUIRE(illformed.tag == FailTag::IllFormedInsert);
  REQUIRE(illformed.t12 == Operation::ins(-1, 'f').with_priority(1));

  // matched failures count as equivalent
  Tp1Outcome matched = evaluate_tp1_instance(fn("identity"), Operation::del(5),
                                             Operation::del(5), "uvwxyz");
  REQUIRE(matched.pass);
  REQUIRE(matched.tag == FailTag::ApplicationMismatch);

  // a clean pass
  Tp1Outcome passed = evaluate_tp1_instance(fn("sun"), Operation::ins(0, 'a'),
                                            Operation::del(2), "uvwxyz");
  REQUIRE(passed.pass);
  REQUIRE(doc(passed.left) == doc(passed.right));
}

TEST_CASE("tp1 check finds the insert-against-delete witness of the priority function") {
  OperationDomain dom{3, "f", "uvwxyz", 0};
  TP1Report rep = check_tp1(fn("ellis"), dom);
  REQUIRE_FALSE(rep.holds);
  REQUIRE(rep.instances == 64);  // 8 operations, ordered pairs

  bool found = false;
  for (const TP1Witness& w : rep.witnesses)
    if (w.o1 == Operation::ins(1, 'f').with_priority(1) &&
        w.o2 == Operation::del(1)) {
      found = true;
      REQUIRE(w.t21 == Operation::del(2));
      REQUIRE(w.t12 == Operation::ins(0, 'f').with_priority(1));
      REQUIRE(w.tag == FailTag::StateDivergence);
      REQUIRE(doc(w.left) == "ufwxyz");
      REQUIRE(doc(w.right) == "fuwxyz");
    }
  REQUIRE(found);

  // witnesses are sorted by their operation tuples
  for (size_t i = 1; i < rep.witnesses.size(); ++i) {
    const TP1Witness& a = rep.witnesses[i - 1];
    const TP1Witness& b = rep.witnesses[i];
    REQUIRE(std::tie(a.o1, a.o2, a.t21, a.t12) <=
            std::tie(b.o1, b.o2, b.t21, b.t12));
  }
}

TEST_CASE("tp1 verdicts across the catalog at the default domain") {
  REQUIRE_FALSE(check_tp1(fn("ellis"), OperationDomain{}).holds);
  REQUIRE_FALSE(check_tp1(fn("sun"), OperationDomain{}).holds);
  REQUIRE_FALSE(check_tp1(fn("identity"), OperationDomain{}).holds);
  REQUIRE(check_tp1(fn("ressel"), OperationDomain{}).holds);
  REQUIRE(check_tp1(fn("imine"), OperationDomain{}).holds);
  REQUIRE(check_tp1(fn("suleiman"), OperationDomain{}).holds);
}

TEST_CASE("environment-set function keeps tp1 only until sets accumulate") {
  REQUIRE(check_tp1(fn("suleiman"), OperationDomain{1, "abc", "uvw", 1}).holds);

  TP1Report deep = check_tp1(fn("suleiman"), OperationDomain{1, "abc", "uvw", 2});
  REQUIRE_FALSE(deep.holds);
  bool found = false;
  for (const TP1Witness& w : deep.witnesses)
    if (w.o1 == ins_env(0, 'a', {0}, {0}) && w.o2 == ins_env(0, 'b', {0}, {0})) {
      found = true;
      REQUIRE(w.tag == FailTag::StateDivergence);
    }
  REQUIRE(found);
}

TEST_CASE("equal-position insert witnesses appear for the plain position function") {
  TP1Report rep = check_tp1(fn("sun"), OperationDomain{});
  REQUIRE_FALSE(rep.holds);
  for (const TP1Witness& w : rep.witnesses) {
    REQUIRE(w.o1.is_ins());
    REQUIRE(w.o2.is_ins());
    REQUIRE(w.o1.pos == w.o2.pos);
    REQUIRE(w.o1.ch != w.o2.ch);
  }
}

TEST_CASE("tp2 check finds the site-id counterexample triple") {
  OperationDomain dom{3, "ce", "uvwxyz", 0};
  TP2Report rep = check_tp2(fn("ressel"), dom);
  REQUIRE_FALSE(rep.holds);
  // 12 operations, ordered triples, six slot-id assignments
  REQUIRE(rep.instances == 12 * 12 * 12 * 6);

  bool found = false;
  for (const TP2Witness& w : rep.witnesses)
    if (w.o1 == Operation::del(1) && w.o2 == Operation::ins(2, 'c').with_site(2) &&
        w.o3 == Operation::ins(1, 'e').with_site(3)) {
      found = true;
      REQUIRE(w.r1 == Operation::ins(2, 'e').with_site(3));
      REQUIRE(w.r2 == Operation::ins(1, 'e').with_site(3));
    }
  REQUIRE(found);
}

TEST_CASE("tp2 check finds the initial-position counterexample at depth one") {
  OperationDomain dom{2, "ce", "uvwx", 1};
  TP2Report rep = check_tp2(fn("imine"), dom);
  REQUIRE_FALSE(rep.holds);

  bool found = false;
  for (const TP2Witness& w : rep.witnesses)
    if (w.o1 == Operation::del(1) &&
        w.o2 == Operation::ins(2, 'c').with_initial_pos(2) &&
        w.o3 == Operation::ins(1, 'e').with_initial_pos(2)) {
      found = true;
      REQUIRE(w.r1 == Operation::ins(2, 'e').with_initial_pos(2));
      REQUIRE(w.r2 == Operation::ins(1, 'e').with_initial_pos(2));
    }
  REQUIRE(found);

  // at depth 0 every reachable triple agrees
  REQUIRE(check_tp2(fn("imine"), OperationDomain{2, "ce", "uvwx", 0}).holds);
}

TEST_CASE("tp2 witnesses re-fail when replayed in isolation") {
  TP2Report rep = check_tp2(fn("ressel"), OperationDomain{3, "ce", "uvwxyz", 0});
  const ITFunction& it = fn("ressel");
  REQUIRE_FALSE(rep.witnesses.empty());
  for (const TP2Witness& w : rep.witnesses) {
    Operation r1 = it(it(w.o3, w.o1), it(w.o2, w.o1));
    Operation r2 = it(it(w.o3, w.o2), it(w.o1, w.o2));
    REQUIRE(r1 == w.r1);
    REQUIRE(r2 == w.r2);
    REQUIRE_FALSE(r1 == r2);
  }
}
