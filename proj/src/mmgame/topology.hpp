#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mmg {

enum class Family { AB, Ab, aB, ab };
enum class Player { Alice, Bob };

// Decision graph of one player: the binary tree of full move histories, or
// the quadrant that only records how often each move was played.
enum class SideKind { Tree, Lattice };

struct GameSpec {
  Family family = Family::AB;
  int rounds = 1;
  Player first_mover = Player::Alice;

  int depth() const { return 2 * rounds; }
  bool alice_first() const { return first_mover == Player::Alice; }
  friend bool operator==(const GameSpec&, const GameSpec&) = default;
};

// One player's coordinate. For a tree word, `code` holds the letters as a
// binary number (letter 1 -> digit 0, letter 2 -> digit 1, first letter most
// significant). For a lattice pair (i, j) with i + j = len, `code` is i.
struct Side {
  uint32_t len = 0;
  uint64_t code = 0;
  friend bool operator==(const Side&, const Side&) = default;
};

struct Vertex {
  Side a;
  Side b;
  uint32_t depth() const { return a.len + b.len; }
  friend bool operator==(const Vertex&, const Vertex&) = default;
};

struct LevelShape {
  uint32_t a_len = 0;
  uint32_t b_len = 0;
  uint64_t a_count = 1;
  uint64_t b_count = 1;
  uint64_t size() const { return a_count * b_count; }
};

SideKind a_kind(Family f);
SideKind b_kind(Family f);

uint64_t side_count(SideKind kind, uint32_t len);
// Ordinal of the child reached by `move` (1 or 2).
uint64_t child_code(SideKind kind, uint64_t code, int move);
Side child_side(SideKind kind, const Side& s, int move);

void validate_spec(const GameSpec& spec);

Vertex root(const GameSpec& spec);
Player turn(const GameSpec& spec, int depth);
// True when the a-coordinate is extended at this depth.
bool a_moves_at(const GameSpec& spec, int depth);
std::array<Vertex, 2> children(const GameSpec& spec, const Vertex& v);
// In-neighbours of a non-root vertex (one or two of them).
std::vector<Vertex> parents(const GameSpec& spec, const Vertex& v);
LevelShape level_shape(const GameSpec& spec, int depth);
std::vector<Vertex> level(const GameSpec& spec, int depth);
uint64_t outcome_count(const GameSpec& spec);
uint64_t level_index(const GameSpec& spec, const Vertex& v);
Vertex vertex_at(const GameSpec& spec, int depth, uint64_t ordinal);
bool is_outcome(const GameSpec& spec, const Vertex& v);
// Throws unless `v` is a vertex of the truncated game-graph.
void check_vertex(const GameSpec& spec, const Vertex& v);

// Stable 64-bit key: depth in the top byte, level ordinal below.
inline uint64_t vertex_key(const GameSpec& spec, const Vertex& v) {
  return (uint64_t(v.depth()) << 56) | level_index(spec, v);
}

// Text forms: tree word over {1,2} ("" when empty), lattice pair "i,j",
// vertex "a|b".
std::string side_to_string(SideKind kind, const Side& s);
Side side_from_string(SideKind kind, std::string_view text);
std::string vertex_to_string(const GameSpec& spec, const Vertex& v);
Vertex vertex_from_string(const GameSpec& spec, std::string_view text);

std::string family_name(Family f);
// Accepts "AB", "Ab", "aB", "ab" with an optional trailing "'" for the
// Bob-first variant.
GameSpec parse_spec(std::string_view name, int rounds);
std::string spec_name(const GameSpec& spec);
Family parse_family(std::string_view name);

}  // namespace mmg
