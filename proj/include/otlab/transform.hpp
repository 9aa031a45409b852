#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "otlab/core.hpp"

namespace otlab {

/// Which extension field an inclusive-transformation function consults to
/// break insert/insert ties.
enum class ItFamily { Basic, Priority, SiteId, AvAp, InitialPos };

/// Thrown when a transformation needs a tie-break field the operand lacks.
struct MissingExtensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The 14 argument-shape cases an IT call can fall into (no-op operands are
/// handled before classification). Naming: first letter = kind of the
/// transformed operation, second = kind of the operation transformed against;
/// suffix = relation between the two positions, with the insert/insert
/// equal-position case split further by character relation.
enum class TransformCase {
  II_PosLt,
  II_PosGt,
  II_PosEqChLt,
  II_PosEqChGt,
  II_PosEqChEq,
  ID_PosLt,
  ID_PosEq,
  ID_PosGt,
  DI_PosLt,
  DI_PosEq,
  DI_PosGt,
  DD_PosLt,
  DD_PosEq,
  DD_PosGt,
};

inline constexpr int kTransformCaseCount = 14;

inline const char* to_string(TransformCase c) {
  switch (c) {
    case TransformCase::II_PosLt: return "ins/ins p1<p2";
    case TransformCase::II_PosGt: return "ins/ins p1>p2";
    case TransformCase::II_PosEqChLt: return "ins/ins p1=p2 c1<c2";
    case TransformCase::II_PosEqChGt: return "ins/ins p1=p2 c1>c2";
    case TransformCase::II_PosEqChEq: return "ins/ins p1=p2 c1=c2";
    case TransformCase::ID_PosLt: return "ins/del p1<p2";
    case TransformCase::ID_PosEq: return "ins/del p1=p2";
    case TransformCase::ID_PosGt: return "ins/del p1>p2";
    case TransformCase::DI_PosLt: return "del/ins p1<p2";
    case TransformCase::DI_PosEq: return "del/ins p1=p2";
    case TransformCase::DI_PosGt: return "del/ins p1>p2";
    case TransformCase::DD_PosLt: return "del/del p1<p2";
    case TransformCase::DD_PosEq: return "del/del p1=p2";
    case TransformCase::DD_PosGt: return "del/del p1>p2";
  }
  return "?";
}

/// Classify IT(o1, o2). Returns no value when either operand is a no-op.
inline std::optional<TransformCase> classify(const Operation& o1,
                                             const Operation& o2) {
  if (o1.is_nop() || o2.is_nop()) return std::nullopt;
  if (o1.is_ins() && o2.is_ins()) {
    if (o1.pos < o2.pos) return TransformCase::II_PosLt;
    if (o1.pos > o2.pos) return TransformCase::II_PosGt;
    if (o1.ch < o2.ch) return TransformCase::II_PosEqChLt;
    if (o1.ch > o2.ch) return TransformCase::II_PosEqChGt;
    return TransformCase::II_PosEqChEq;
  }
  if (o1.is_ins() && o2.is_del()) {
    if (o1.pos < o2.pos) return TransformCase::ID_PosLt;
    if (o1.pos > o2.pos) return TransformCase::ID_PosGt;
    return TransformCase::ID_PosEq;
  }
  if (o1.is_del() && o2.is_ins()) {
    if (o1.pos < o2.pos) return TransformCase::DI_PosLt;
    if (o1.pos > o2.pos) return TransformCase::DI_PosGt;
    return TransformCase::DI_PosEq;
  }
  if (o1.pos < o2.pos) return TransformCase::DD_PosLt;
  if (o1.pos > o2.pos) return TransformCase::DD_PosGt;
  return TransformCase::DD_PosEq;
}

/// The case classifying IT(o2, o1) given the case of IT(o1, o2).
inline TransformCase mirror(TransformCase c) {
  switch (c) {
    case TransformCase::II_PosLt: return TransformCase::II_PosGt;
    case TransformCase::II_PosGt: return TransformCase::II_PosLt;
    case TransformCase::II_PosEqChLt: return TransformCase::II_PosEqChGt;
    case TransformCase::II_PosEqChGt: return TransformCase::II_PosEqChLt;
    case TransformCase::II_PosEqChEq: return TransformCase::II_PosEqChEq;
    case TransformCase::ID_PosLt: return TransformCase::DI_PosGt;
    case TransformCase::ID_PosEq: return TransformCase::DI_PosEq;
    case TransformCase::ID_PosGt: return TransformCase::DI_PosLt;
    case TransformCase::DI_PosLt: return TransformCase::ID_PosGt;
    case TransformCase::DI_PosEq: return TransformCase::ID_PosEq;
    case TransformCase::DI_PosGt: return TransformCase::ID_PosLt;
    case TransformCase::DD_PosLt: return TransformCase::DD_PosGt;
    case TransformCase::DD_PosGt: return TransformCase::DD_PosLt;
    case TransformCase::DD_PosEq: return TransformCase::DD_PosEq;
  }
  return c;
}

/// An inclusive transformation function: IT(o1, o2) rewrites o1 so that it
/// has the same effect after o2 has executed as it had before.
struct ITFunction {
  std::string name;
  ItFamily family = ItFamily::Basic;
  std::function<Operation(const Operation&, const Operation&)> fn;

  Operation operator()(const Operation& o1, const Operation& o2) const {
    if (o2.is_nop()) return o1;
    if (o1.is_nop()) return o1;
    return fn(o1, o2);
  }
};

/// IT(o, [s1..sn]) folded left to right.
inline Operation transform_along(const ITFunction& it, Operation o,
                                 const std::vector<Operation>& seq) {
  for (const Operation& s : seq) o = it(o, s);
  return o;
}

namespace detail {

inline int need_priority(const Operation& o) {
  if (!o.ext.priority)
    throw MissingExtensionError("operation lacks a priority: " + o.str());
  return *o.ext.priority;
}

inline int need_site(const Operation& o) {
  if (!o.ext.site)
    throw MissingExtensionError("operation lacks a site id: " + o.str());
  return *o.ext.site;
}

inline int need_initial_pos(const Operation& o) {
  if (!o.ext.initial_pos)
    throw MissingExtensionError("operation lacks an initial position: " + o.str());
  return *o.ext.initial_pos;
}

inline bool intersects(const std::vector<int>& a, const std::vector<int>& b) {
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return true;
    (a[i] < b[j] ? i : j)++;
  }
  return false;
}

// Deletion cases shared verbatim by all five functions.
inline Operation common_del(const Operation& o1, const Operation& o2) {
  if (o2.is_del()) {
    if (o1.pos < o2.pos) return o1;
    if (o1.pos > o2.pos) return o1.at(o1.pos - 1);
    return Operation::nop();
  }
  // o2 inserts
  if (o1.pos < o2.pos) return o1;
  return o1.at(o1.pos + 1);
}

}  // namespace detail

inline Operation it_ellis(const Operation& o1, const Operation& o2) {
  using namespace detail;
  if (o1.is_del()) return common_del(o1, o2);
  if (o2.is_ins()) {
    if (o1.pos < o2.pos) return o1;
    if (o1.pos > o2.pos) return o1.at(o1.pos + 1);
    if (o1.ch == o2.ch) return Operation::nop();
    if (need_priority(o1) < need_priority(o2)) return o1;
    return o1.at(o1.pos + 1);
  }
  // o2 deletes; equal positions shift down as well
  if (o1.pos < o2.pos) return o1;
  return o1.at(o1.pos - 1);
}

inline Operation it_ressel(const Operation& o1, const Operation& o2) {
  using namespace detail;
  if (o1.is_del()) return common_del(o1, o2);
  if (o2.is_ins()) {
    if (o1.pos < o2.pos || (o1.pos == o2.pos && need_site(o1) < need_site(o2)))
      return o1;
    return o1.at(o1.pos + 1);
  }
  if (o1.pos <= o2.pos) return o1;
  return o1.at(o1.pos - 1);
}

inline Operation it_sun(const Operation& o1, const Operation& o2) {
  using namespace detail;
  if (o1.is_del()) return common_del(o1, o2);
  if (o2.is_ins()) {
    if (o1.pos < o2.pos) return o1;
    return o1.at(o1.pos + 1);
  }
  if (o1.pos <= o2.pos) return o1;
  return o1.at(o1.pos - 1);
}

inline Operation it_suleiman(const Operation& o1, const Operation& o2) {
  using namespace detail;
  if (o1.is_del()) return common_del(o1, o2);
  if (o2.is_ins()) {
    if (o1.pos < o2.pos) return o1;
    if (o1.pos > o2.pos) return o1.at(o1.pos + 1);
    // Equal positions: the recorded delete environments decide first. When o1
    // saw a deletion happen before o2's recorded position range and o2 saw it
    // after, o1 lands behind o2 (and symmetrically); the increment branch is
    // tested first, which matters when both intersections are occupied.
    if (intersects(o1.ext.deleted_before, o2.ext.deleted_after))
      return o1.at(o1.pos + 1);
    if (intersects(o1.ext.deleted_after, o2.ext.deleted_before)) return o1;
    if (o1.ch > o2.ch) return o1;
    if (o1.ch < o2.ch) return o1.at(o1.pos + 1);
    return Operation::nop();
  }
  // o2 deletes: record its position in the appropriate environment set
  Operation r = o1;
  if (o1.pos <= o2.pos) {
    r.ext.deleted_after = with_position(r.ext.deleted_after, o2.pos);
    return r;
  }
  r.ext.deleted_before = with_position(r.ext.deleted_before, o2.pos);
  r.pos -= 1;
  return r;
}

inline Operation it_imine(const Operation& o1, const Operation& o2) {
  using namespace detail;
  if (o1.is_del()) return common_del(o1, o2);
  if (o2.is_ins()) {
    if (o1.pos < o2.pos) return o1;
    if (o1.pos > o2.pos) return o1.at(o1.pos + 1);
    int ip1 = need_initial_pos(o1), ip2 = need_initial_pos(o2);
    if (ip1 < ip2) return o1;
    if (ip1 > ip2) return o1.at(o1.pos + 1);
    if (o1.ch < o2.ch) return o1;
    if (o1.ch > o2.ch) return o1.at(o1.pos + 1);
    return Operation::nop();
  }
  if (o1.pos <= o2.pos) return o1;
  return o1.at(o1.pos - 1);
}

inline Operation it_identity(const Operation& o1, const Operation&) { return o1; }

inline const std::vector<ITFunction>& it_catalog() {
  static const std::vector<ITFunction> fns = {
      {"ellis", ItFamily::Priority, it_ellis},
      {"ressel", ItFamily::SiteId, it_ressel},
      {"sun", ItFamily::Basic, it_sun},
      {"suleiman", ItFamily::AvAp, it_suleiman},
      {"imine", ItFamily::InitialPos, it_imine},
      {"identity", ItFamily::Basic, it_identity},
  };
  return fns;
}

inline const ITFunction* find_it_function(const std::string& name) {
  for (const ITFunction& f : it_catalog())
    if (f.name == name) return &f;
  return nullptr;
}

}  // namespace otlab
