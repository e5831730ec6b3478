#pragma once

// VM placement: network segment (x), service port (y) and user (z)
// matrices, all stored VM-major with n rows.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mtd/game.hpp"
#include "mtd/random.hpp"

namespace mtd {

class BinaryMatrix {
 public:
  BinaryMatrix() = default;
  BinaryMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), bits_(rows * cols, 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool at(std::size_t i, std::size_t j) const { return bits_[i * cols_ + j] != 0; }
  void set(std::size_t i, std::size_t j, bool value) { bits_[i * cols_ + j] = value ? 1 : 0; }
  std::size_t row_sum(std::size_t i) const;
  std::size_t col_sum(std::size_t j) const;
  /// Number of differing entries between row i here and row i of other.
  std::size_t row_distance(const BinaryMatrix& other, std::size_t i) const;
  bool row_equal(const BinaryMatrix& other, std::size_t i) const { return row_distance(other, i) == 0; }

  bool operator==(const BinaryMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint8_t> bits_;
};

struct Assignment {
  BinaryMatrix x;  // n x r: VM i sits in segment j
  BinaryMatrix y;  // n x u: VM i exposes port j
  BinaryMatrix z;  // n x q: user j is served by VM i

  std::size_t vm_count() const { return x.rows(); }
  /// First set column of the row, or the column count if the row is empty.
  std::size_t segment_of(std::size_t vm) const;
  std::size_t port_of(std::size_t vm) const;
  std::vector<std::size_t> users_of(std::size_t vm) const;
  std::vector<std::size_t> segment_sizes() const;

  void move_segment(std::size_t vm, std::size_t segment);
  void move_port(std::size_t vm, std::size_t port);
  void move_user(std::size_t user, std::size_t from, std::size_t to);

  bool operator==(const Assignment&) const = default;
};

enum class ViolationKind {
  dimension,     // matrix shape disagrees with the config
  segment_empty, // segment hosts no VM
  vm_segments,   // VM not in exactly one segment
  port_shared,   // port used by more than n VMs
  vm_ports,      // VM does not expose exactly one port
  user_vms,      // user not on exactly one VM
  vm_capacity,   // VM serves more than m users
};

struct Violation {
  ViolationKind kind;
  std::size_t index = 0;  // segment, VM, port or user, by kind
  std::size_t sum = 0;    // observed row/column sum
  std::string describe() const;
  /// Short constraint name, e.g. "segment-empty" or "capacity".
  std::string constraint() const;
};

std::vector<Violation> validate_assignment(const Assignment& a, const GameConfig& config);

/// Segments round-robin over VMs then permuted, one uniform port per VM,
/// users dealt m per VM from a random permutation.
Assignment random_initial_assignment(const GameConfig& config, RandomSource& rng);

/// Sum over shuffled VMs of w1 |dx| + w2 |dy| + w3 |dz| on that VM's rows.
double shuffle_cost(const Assignment& before, const Assignment& after, const DefendAction& shuffled,
                    const Weights& weights);

/// VMs whose x, y or z row differs between the two assignments.
VmSet changed_rows(const Assignment& before, const Assignment& after);

// Text dump:
//   assignment <n> <r> <u> <q>
//   x
//   <n lines of r '0'/'1' characters>
//   y
//   <n lines of u characters>
//   z
//   <n lines of q characters>
void write_assignment(std::ostream& out, const Assignment& a);
Assignment read_assignment(std::istream& in);

}  // namespace mtd
