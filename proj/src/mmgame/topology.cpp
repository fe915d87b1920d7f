#include "mmgame/topology.hpp"

#include <charconv>

#include "mmgame/error.hpp"

namespace mmg {

SideKind a_kind(Family f) {
  return (f == Family::AB || f == Family::Ab) ? SideKind::Tree : SideKind::Lattice;
}

SideKind b_kind(Family f) {
  return (f == Family::AB || f == Family::aB) ? SideKind::Tree : SideKind::Lattice;
}

uint64_t side_count(SideKind kind, uint32_t len) {
  if (kind == SideKind::Lattice) return uint64_t(len) + 1;
  if (len > 62) fail(ErrorCode::Domain, "tree side of length " + std::to_string(len) + " does not fit 64-bit indexing");
  return uint64_t(1) << len;
}

uint64_t child_code(SideKind kind, uint64_t code, int move) {
  if (kind == SideKind::Tree) return code * 2 + uint64_t(move - 1);
  return move == 1 ? code + 1 : code;
}

Side child_side(SideKind kind, const Side& s, int move) {
  return Side{s.len + 1, child_code(kind, s.code, move)};
}

void validate_spec(const GameSpec& spec) {
  if (spec.rounds < 0) fail(ErrorCode::InvalidArgument, "rounds must be nonnegative");
  int cap = 1 << 20;
  switch (spec.family) {
    case Family::AB: cap = 31; break;
    case Family::Ab:
    case Family::aB: cap = 56; break;
    case Family::ab: break;
  }
  if (spec.rounds > cap)
    fail(ErrorCode::Domain, spec_name(spec) + ": rounds " + std::to_string(spec.rounds) +
                                " exceed the indexable maximum " + std::to_string(cap));
}

Vertex root(const GameSpec&) { return Vertex{}; }

bool a_moves_at(const GameSpec& spec, int depth) {
  return ((depth % 2) == 0) == spec.alice_first();
}

Player turn(const GameSpec& spec, int depth) {
  if (depth < 0 || depth >= spec.depth())
    fail(ErrorCode::Domain, "no player moves at depth " + std::to_string(depth));
  return a_moves_at(spec, depth) ? Player::Alice : Player::Bob;
}

LevelShape level_shape(const GameSpec& spec, int depth) {
  if (depth < 0 || depth > spec.depth())
    fail(ErrorCode::Domain, "depth " + std::to_string(depth) + " outside [0, " + std::to_string(spec.depth()) + "]");
  LevelShape s;
  uint32_t hi = uint32_t((depth + 1) / 2), lo = uint32_t(depth / 2);
  s.a_len = spec.alice_first() ? hi : lo;
  s.b_len = spec.alice_first() ? lo : hi;
  s.a_count = side_count(a_kind(spec.family), s.a_len);
  s.b_count = side_count(b_kind(spec.family), s.b_len);
  return s;
}

uint64_t outcome_count(const GameSpec& spec) { return level_shape(spec, spec.depth()).size(); }

static bool side_valid(SideKind kind, const Side& s) {
  if (kind == SideKind::Lattice) return s.code <= s.len;
  return s.len > 62 || s.code < (uint64_t(1) << s.len);
}

void check_vertex(const GameSpec& spec, const Vertex& v) {
  int d = int(v.depth());
  if (d > spec.depth()) fail(ErrorCode::Domain, "vertex deeper than the truncated game-graph");
  LevelShape s = level_shape(spec, d);
  if (v.a.len != s.a_len || v.b.len != s.b_len)
    fail(ErrorCode::InvalidArgument, "vertex coordinates inconsistent with the move order");
  if (!side_valid(a_kind(spec.family), v.a) || !side_valid(b_kind(spec.family), v.b))
    fail(ErrorCode::InvalidArgument, "vertex coordinate code out of range");
}

bool is_outcome(const GameSpec& spec, const Vertex& v) { return int(v.depth()) == spec.depth(); }

std::array<Vertex, 2> children(const GameSpec& spec, const Vertex& v) {
  int d = int(v.depth());
  if (d >= spec.depth())
    fail(ErrorCode::Domain, "depth overflow: outcome " + vertex_to_string(spec, v) + " has no children");
  std::array<Vertex, 2> out{v, v};
  bool a_turn = a_moves_at(spec, d);
  for (int k = 1; k <= 2; ++k) {
    if (a_turn)
      out[k - 1].a = child_side(a_kind(spec.family), v.a, k);
    else
      out[k - 1].b = child_side(b_kind(spec.family), v.b, k);
  }
  return out;
}

std::vector<Vertex> parents(const GameSpec& spec, const Vertex& v) {
  int d = int(v.depth());
  if (d == 0) return {};
  check_vertex(spec, v);
  bool a_turn = a_moves_at(spec, d - 1);
  SideKind kind = a_turn ? a_kind(spec.family) : b_kind(spec.family);
  const Side& s = a_turn ? v.a : v.b;
  std::vector<Vertex> out;
  auto push = [&](Side ps) {
    Vertex u = v;
    (a_turn ? u.a : u.b) = ps;
    out.push_back(u);
  };
  if (kind == SideKind::Tree) {
    push(Side{s.len - 1, s.code >> 1});
  } else {
    if (s.code >= 1) push(Side{s.len - 1, s.code - 1});  // reached by move 1
    if (s.code < s.len) push(Side{s.len - 1, s.code});   // reached by move 2
  }
  return out;
}

uint64_t level_index(const GameSpec& spec, const Vertex& v) {
  LevelShape s = level_shape(spec, int(v.depth()));
  return v.a.code * s.b_count + v.b.code;
}

Vertex vertex_at(const GameSpec& spec, int depth, uint64_t ordinal) {
  LevelShape s = level_shape(spec, depth);
  if (ordinal >= s.size()) fail(ErrorCode::InvalidArgument, "level ordinal out of range");
  return Vertex{Side{s.a_len, ordinal / s.b_count}, Side{s.b_len, ordinal % s.b_count}};
}

std::vector<Vertex> level(const GameSpec& spec, int depth) {
  LevelShape s = level_shape(spec, depth);
  std::vector<Vertex> out;
  out.reserve(s.size());
  for (uint64_t i = 0; i < s.size(); ++i) out.push_back(vertex_at(spec, depth, i));
  return out;
}

std::string side_to_string(SideKind kind, const Side& s) {
  if (kind == SideKind::Lattice) return std::to_string(s.code) + "," + std::to_string(s.len - s.code);
  std::string w(s.len, '1');
  for (uint32_t k = 0; k < s.len; ++k)
    if ((s.code >> (s.len - 1 - k)) & 1) w[k] = '2';
  return w;
}

static uint64_t parse_u64(std::string_view t) {
  uint64_t v = 0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size() || t.empty())
    fail(ErrorCode::Parse, "expected a nonnegative integer, got '" + std::string(t) + "'");
  return v;
}

Side side_from_string(SideKind kind, std::string_view text) {
  if (kind == SideKind::Lattice) {
    auto comma = text.find(',');
    if (comma == std::string_view::npos) fail(ErrorCode::Parse, "lattice pair needs 'i,j': " + std::string(text));
    uint64_t i = parse_u64(text.substr(0, comma));
    uint64_t j = parse_u64(text.substr(comma + 1));
    return Side{uint32_t(i + j), i};
  }
  if (text.size() > 62) fail(ErrorCode::Parse, "tree word too long");
  Side s{uint32_t(text.size()), 0};
  for (char c : text) {
    if (c != '1' && c != '2') fail(ErrorCode::Parse, "tree word must use letters 1 and 2: " + std::string(text));
    s.code = s.code * 2 + uint64_t(c - '1');
  }
  return s;
}

std::string vertex_to_string(const GameSpec& spec, const Vertex& v) {
  return side_to_string(a_kind(spec.family), v.a) + "|" + side_to_string(b_kind(spec.family), v.b);
}

Vertex vertex_from_string(const GameSpec& spec, std::string_view text) {
  auto bar = text.find('|');
  if (bar == std::string_view::npos) fail(ErrorCode::Parse, "vertex needs 'a|b': " + std::string(text));
  Vertex v{side_from_string(a_kind(spec.family), text.substr(0, bar)),
           side_from_string(b_kind(spec.family), text.substr(bar + 1))};
  check_vertex(spec, v);
  return v;
}

std::string family_name(Family f) {
  switch (f) {
    case Family::AB: return "AB";
    case Family::Ab: return "Ab";
    case Family::aB: return "aB";
    case Family::ab: return "ab";
  }
  return "?";
}

Family parse_family(std::string_view name) {
  if (name == "AB") return Family::AB;
  if (name == "Ab") return Family::Ab;
  if (name == "aB") return Family::aB;
  if (name == "ab") return Family::ab;
  fail(ErrorCode::Parse, "unknown family '" + std::string(name) + "' (expected AB, Ab, aB, ab)");
}

GameSpec parse_spec(std::string_view name, int rounds) {
  GameSpec s;
  if (!name.empty() && name.back() == '\'') {
    s.first_mover = Player::Bob;
    name.remove_suffix(1);
  }
  s.family = parse_family(name);
  s.rounds = rounds;
  validate_spec(s);
  return s;
}

std::string spec_name(const GameSpec& spec) {
  return family_name(spec.family) + (spec.alice_first() ? "" : "'");
}

}  // namespace mmg
