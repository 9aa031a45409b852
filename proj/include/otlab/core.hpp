#pragma once

#include <algorithm>
#include <compare>
#include <optional>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

namespace otlab {

using Symbol = char;
using Document = std::string;

enum class OpKind { Ins, Del, Nop };

inline const char* to_string(OpKind k) {
  switch (k) {
    case OpKind::Ins: return "ins";
    case OpKind::Del: return "del";
    case OpKind::Nop: return "nop";
  }
  return "?";
}

/// Algorithm-specific metadata carried by an operation. Each transformation
/// function reads only the fields its tie-breaking rule needs; the rest stay
/// unset. `deleted_before` / `deleted_after` are the sets of delete positions
/// an insertion has been transformed against (positions, kept sorted-unique,
/// stand in for the delete operations themselves since a plain deletion is
/// fully described by its position).
struct Extension {
  std::optional<int> priority;
  std::optional<int> site;
  std::optional<int> initial_pos;
  std::vector<int> deleted_before;
  std::vector<int> deleted_after;

  bool operator==(const Extension&) const = default;

  auto tie() const {
    return std::make_tuple(priority, site, initial_pos, deleted_before,
                           deleted_after);
  }
};

/// Add `p` to a sorted-unique position set.
inline std::vector<int> with_position(std::vector<int> set, int p) {
  auto it = std::lower_bound(set.begin(), set.end(), p);
  if (it == set.end() || *it != p) set.insert(it, p);
  return set;
}

struct Operation {
  OpKind kind = OpKind::Nop;
  int pos = 0;
  Symbol ch = '\0';
  Extension ext;

  static Operation ins(int pos, Symbol ch) {
    return Operation{OpKind::Ins, pos, ch, {}};
  }
  static Operation del(int pos) { return Operation{OpKind::Del, pos, '\0', {}}; }
  static Operation nop() { return Operation{}; }

  Operation with_priority(int pr) const {
    Operation o = *this;
    o.ext.priority = pr;
    return o;
  }
  Operation with_site(int s) const {
    Operation o = *this;
    o.ext.site = s;
    return o;
  }
  Operation with_initial_pos(int ip) const {
    Operation o = *this;
    o.ext.initial_pos = ip;
    return o;
  }
  /// Shifted copy (same kind/char/extension, position + delta).
  Operation at(int new_pos) const {
    Operation o = *this;
    o.pos = new_pos;
    return o;
  }

  bool is_ins() const { return kind == OpKind::Ins; }
  bool is_del() const { return kind == OpKind::Del; }
  bool is_nop() const { return kind == OpKind::Nop; }

  bool operator==(const Operation&) const = default;

  /// Deterministic total order: deletions, then insertions, then no-ops;
  /// within a kind by position, character, then extension fields.
  bool operator<(const Operation& other) const {
    auto rank = [](OpKind k) { return k == OpKind::Del ? 0 : k == OpKind::Ins ? 1 : 2; };
    return std::make_tuple(rank(kind), pos, ch, ext.tie()) <
           std::make_tuple(rank(other.kind), other.pos, other.ch, other.ext.tie());
  }

  std::string str() const {
    std::string s;
    switch (kind) {
      case OpKind::Nop: return "Nop";
      case OpKind::Del: s = "Del(" + std::to_string(pos); break;
      case OpKind::Ins: s = "Ins(" + std::to_string(pos) + "," + std::string(1, ch); break;
    }
    if (ext.priority) s += ",pr=" + std::to_string(*ext.priority);
    if (ext.site) s += ",u=" + std::to_string(*ext.site);
    if (ext.initial_pos) s += ",ip=" + std::to_string(*ext.initial_pos);
    auto set = [](const std::vector<int>& v) {
      std::string t = "{";
      for (size_t i = 0; i < v.size(); ++i) t += (i ? "," : "") + std::to_string(v[i]);
      return t + "}";
    };
    if (!ext.deleted_before.empty() || !ext.deleted_after.empty())
      s += ",av=" + set(ext.deleted_before) + ",ap=" + set(ext.deleted_after);
    return s + ")";
  }
};

/// Application failure: the operation's position fell outside the document.
/// `seq_index` is the offset within the sequence being applied (0 for a
/// single operation).
struct OutOfRange {
  Operation op;
  int doc_length = 0;
  int seq_index = 0;

  bool operator==(const OutOfRange&) const = default;
};

using ApplyResult = std::variant<Document, OutOfRange>;

inline bool ok(const ApplyResult& r) { return std::holds_alternative<Document>(r); }
inline const Document& doc(const ApplyResult& r) { return std::get<Document>(r); }
inline const OutOfRange& error(const ApplyResult& r) { return std::get<OutOfRange>(r); }

/// Execute one operation. Insertion is valid at positions 0..len (inclusive),
/// deletion at 0..len-1. Invalid positions are reported, never clamped.
inline ApplyResult apply_op(const Document& d, const Operation& o) {
  const int len = static_cast<int>(d.size());
  switch (o.kind) {
    case OpKind::Nop:
      return d;
    case OpKind::Ins: {
      if (o.pos < 0 || o.pos > len) return OutOfRange{o, len, 0};
      Document out = d;
      out.insert(out.begin() + o.pos, o.ch);
      return out;
    }
    case OpKind::Del: {
      if (o.pos < 0 || o.pos >= len) return OutOfRange{o, len, 0};
      Document out = d;
      out.erase(out.begin() + o.pos);
      return out;
    }
  }
  return OutOfRange{o, len, 0};
}

/// Execute a sequence left to right; on failure, reports the failing
/// operation's index within the sequence.
inline ApplyResult apply_sequence(const Document& d,
                                  const std::vector<Operation>& seq) {
  Document cur = d;
  for (size_t i = 0; i < seq.size(); ++i) {
    ApplyResult r = apply_op(cur, seq[i]);
    if (!ok(r)) {
      OutOfRange e = error(r);
      e.seq_index = static_cast<int>(i);
      return e;
    }
    cur = doc(r);
  }
  return cur;
}

/// Two sequences are equivalent on a document when they both succeed with the
/// same result, or both fail at the same step. A success and a failure are
/// never equivalent.
inline bool sequences_equivalent(const Document& d,
                                 const std::vector<Operation>& a,
                                 const std::vector<Operation>& b) {
  ApplyResult ra = apply_sequence(d, a);
  ApplyResult rb = apply_sequence(d, b);
  if (ok(ra) != ok(rb)) return false;
  if (ok(ra)) return doc(ra) == doc(rb);
  return error(ra).seq_index == error(rb).seq_index;
}

}  // namespace otlab
