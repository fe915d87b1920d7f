#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mmgame/topology.hpp"

namespace mmg {

enum class EvenRule { A, a };
enum class OddRule { B, b };
enum class ValueKind { Bit, Real };

struct RuleSchedule {
  EvenRule even = EvenRule::A;
  OddRule odd = OddRule::B;
  ValueKind kind = ValueKind::Bit;
};

RuleSchedule schedule_for(Family f, ValueKind kind);
RuleSchedule parse_schedule(const std::string& name, ValueKind kind);
std::string schedule_name(const RuleSchedule& s);

// Window of the quadrant: cell (i,j) at cells[j*width + i]. Only cells whose
// whole genealogy lies inside the initial window are kept.
template <class T>
struct Grid {
  uint64_t width = 0;
  uint64_t height = 0;
  int time = 0;
  std::vector<T> cells;
  T at(uint64_t i, uint64_t j) const { return cells[j * width + i]; }
  T& at(uint64_t i, uint64_t j) { return cells[j * width + i]; }
};
using BitGrid = Grid<uint8_t>;
using RealGrid = Grid<double>;

// Window size after one more step at time t (t >= 1).
void next_window(const RuleSchedule& s, int t, uint64_t& width, uint64_t& height);

BitGrid step(const BitGrid& g, const RuleSchedule& s, int t);
RealGrid step(const RealGrid& g, const RuleSchedule& s, int t);

BitGrid threshold(const RealGrid& g, double p);

// Initial windows for a game spec: width/height are the outcome-level side
// counts, and cell (i,j) carries outcome ordinal i*height + j.
BitGrid initial_bits(const GameSpec& spec, double p, uint64_t seed);
RealGrid initial_uniforms(uint64_t width, uint64_t height, uint64_t seed);

int evolve_origin(const GameSpec& spec, double p, uint64_t seed);
int evolve_origin_from(const GameSpec& spec, BitGrid g);

struct OriginCheck {
  uint64_t trials = 0;
  uint64_t mismatches = 0;
  uint64_t first_mismatch_seed = 0;  // meaningful when mismatches > 0
};
// Trial t uses seed trial_seed(seed, t) for both the grid and the game.
OriginCheck verify_origin_equivalence(const GameSpec& spec, double p, uint64_t trials, uint64_t seed);
uint64_t trial_seed(uint64_t seed, uint64_t t);

std::vector<RealGrid> snapshot_series(const RuleSchedule& schedule, uint64_t width, uint64_t height,
                                      const std::vector<int>& times, uint64_t seed);

std::string grid_to_csv(const RealGrid& g);
std::string frame_pgm(const RealGrid& g);

}  // namespace mmg
