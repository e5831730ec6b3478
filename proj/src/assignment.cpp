#include "mtd/assignment.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mtd {

std::size_t BinaryMatrix::row_sum(std::size_t i) const {
  const auto first = bits_.begin() + static_cast<std::ptrdiff_t>(i * cols_);
  return static_cast<std::size_t>(std::count(first, first + static_cast<std::ptrdiff_t>(cols_), 1));
}

std::size_t BinaryMatrix::col_sum(std::size_t j) const {
  std::size_t s = 0;
  for (std::size_t i = 0; i < rows_; ++i) s += bits_[i * cols_ + j];
  return s;
}

std::size_t BinaryMatrix::row_distance(const BinaryMatrix& other, std::size_t i) const {
  std::size_t d = 0;
  for (std::size_t j = 0; j < cols_; ++j) d += at(i, j) != other.at(i, j);
  return d;
}

namespace {

std::size_t first_set(const BinaryMatrix& m, std::size_t row) {
  for (std::size_t j = 0; j < m.cols(); ++j) {
    if (m.at(row, j)) return j;
  }
  return m.cols();
}

}  // namespace

std::size_t Assignment::segment_of(std::size_t vm) const { return first_set(x, vm); }
std::size_t Assignment::port_of(std::size_t vm) const { return first_set(y, vm); }

std::vector<std::size_t> Assignment::users_of(std::size_t vm) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < z.cols(); ++j) {
    if (z.at(vm, j)) out.push_back(j);
  }
  return out;
}

std::vector<std::size_t> Assignment::segment_sizes() const {
  std::vector<std::size_t> sizes(x.cols(), 0);
  for (std::size_t j = 0; j < x.cols(); ++j) sizes[j] = x.col_sum(j);
  return sizes;
}

void Assignment::move_segment(std::size_t vm, std::size_t segment) {
  for (std::size_t j = 0; j < x.cols(); ++j) x.set(vm, j, j == segment);
}

void Assignment::move_port(std::size_t vm, std::size_t port) {
  for (std::size_t j = 0; j < y.cols(); ++j) y.set(vm, j, j == port);
}

void Assignment::move_user(std::size_t user, std::size_t from, std::size_t to) {
  z.set(from, user, false);
  z.set(to, user, true);
}

std::string Violation::constraint() const {
  switch (kind) {
    case ViolationKind::dimension: return "dimension";
    case ViolationKind::segment_empty: return "segment-empty";
    case ViolationKind::vm_segments: return "one-segment";
    case ViolationKind::port_shared: return "port-sharing";
    case ViolationKind::vm_ports: return "one-port";
    case ViolationKind::user_vms: return "one-vm-per-user";
    case ViolationKind::vm_capacity: return "capacity";
  }
  return "?";
}

std::string Violation::describe() const {
  std::ostringstream os;
  os << constraint() << ": ";
  switch (kind) {
    case ViolationKind::dimension: os << "matrix " << index << " has the wrong shape"; break;
    case ViolationKind::segment_empty: os << "segment " << index << " hosts " << sum << " VMs"; break;
    case ViolationKind::vm_segments: os << "VM " << index << " is in " << sum << " segments"; break;
    case ViolationKind::port_shared: os << "port " << index << " is used by " << sum << " VMs"; break;
    case ViolationKind::vm_ports: os << "VM " << index << " exposes " << sum << " ports"; break;
    case ViolationKind::user_vms: os << "user " << index << " is on " << sum << " VMs"; break;
    case ViolationKind::vm_capacity: os << "VM " << index << " serves " << sum << " users"; break;
  }
  return os.str();
}

std::vector<Violation> validate_assignment(const Assignment& a, const GameConfig& c) {
  std::vector<Violation> out;
  // index 0/1/2 = x/y/z
  if (a.x.rows() != c.n || a.x.cols() != c.r) out.push_back({ViolationKind::dimension, 0, 0});
  if (a.y.rows() != c.n || a.y.cols() != c.u) out.push_back({ViolationKind::dimension, 1, 0});
  if (a.z.rows() != c.n || a.z.cols() != c.q) out.push_back({ViolationKind::dimension, 2, 0});
  if (!out.empty()) return out;

  for (std::size_t j = 0; j < c.r; ++j) {
    if (auto s = a.x.col_sum(j); s < 1) out.push_back({ViolationKind::segment_empty, j, s});
  }
  for (std::size_t i = 0; i < c.n; ++i) {
    if (auto s = a.x.row_sum(i); s != 1) out.push_back({ViolationKind::vm_segments, i, s});
  }
  for (std::size_t j = 0; j < c.u; ++j) {
    if (auto s = a.y.col_sum(j); s > c.n) out.push_back({ViolationKind::port_shared, j, s});
  }
  for (std::size_t i = 0; i < c.n; ++i) {
    if (auto s = a.y.row_sum(i); s != 1) out.push_back({ViolationKind::vm_ports, i, s});
  }
  for (std::size_t j = 0; j < c.q; ++j) {
    if (auto s = a.z.col_sum(j); s != 1) out.push_back({ViolationKind::user_vms, j, s});
  }
  for (std::size_t i = 0; i < c.n; ++i) {
    if (auto s = a.z.row_sum(i); s > c.m) out.push_back({ViolationKind::vm_capacity, i, s});
  }
  return out;
}

Assignment random_initial_assignment(const GameConfig& c, RandomSource& rng) {
  require_valid(c);
  Assignment a{BinaryMatrix(c.n, c.r), BinaryMatrix(c.n, c.u), BinaryMatrix(c.n, c.q)};

  std::vector<std::size_t> segment(c.n);
  for (std::size_t i = 0; i < c.n; ++i) segment[i] = i % c.r;
  rng.shuffle(std::span<std::size_t>(segment));
  for (std::size_t i = 0; i < c.n; ++i) a.x.set(i, segment[i], true);

  for (std::size_t i = 0; i < c.n; ++i) a.y.set(i, rng.index(c.u), true);

  std::vector<std::size_t> users(c.q);
  std::iota(users.begin(), users.end(), std::size_t{0});
  rng.shuffle(std::span<std::size_t>(users));
  for (std::size_t k = 0; k < c.q; ++k) a.z.set(k / c.m, users[k], true);
  return a;
}

double shuffle_cost(const Assignment& before, const Assignment& after, const DefendAction& shuffled,
                    const Weights& w) {
  double cost = 0.0;
  for (auto v : shuffled.shuffled.members()) {
    cost += w.ip * static_cast<double>(before.x.row_distance(after.x, v.value)) +
            w.port * static_cast<double>(before.y.row_distance(after.y, v.value)) +
            w.migration * static_cast<double>(before.z.row_distance(after.z, v.value));
  }
  return cost;
}

VmSet changed_rows(const Assignment& before, const Assignment& after) {
  VmSet out(before.vm_count());
  for (std::size_t v = 0; v < before.vm_count(); ++v) {
    if (!before.x.row_equal(after.x, v) || !before.y.row_equal(after.y, v) || !before.z.row_equal(after.z, v)) {
      out.insert(v);
    }
  }
  return out;
}

namespace {

void write_matrix(std::ostream& out, const char* name, const BinaryMatrix& m) {
  out << name << '\n';
  std::string line;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    line.assign(m.cols(), '0');
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m.at(i, j)) line[j] = '1';
    }
    out << line << '\n';
  }
}

BinaryMatrix read_matrix(std::istream& in, const char* name, std::size_t rows, std::size_t cols) {
  std::string tag;
  if (!(in >> tag) || tag != name) throw std::runtime_error(std::string("assignment dump: expected section ") + name);
  BinaryMatrix m(rows, cols);
  std::string line;
  for (std::size_t i = 0; i < rows; ++i) {
    if (!(in >> line) || line.size() != cols) {
      throw std::runtime_error(std::string("assignment dump: bad row in ") + name);
    }
    for (std::size_t j = 0; j < cols; ++j) {
      if (line[j] != '0' && line[j] != '1') throw std::runtime_error("assignment dump: non-binary entry");
      m.set(i, j, line[j] == '1');
    }
  }
  return m;
}

}  // namespace

void write_assignment(std::ostream& out, const Assignment& a) {
  out << "assignment " << a.x.rows() << ' ' << a.x.cols() << ' ' << a.y.cols() << ' ' << a.z.cols() << '\n';
  write_matrix(out, "x", a.x);
  write_matrix(out, "y", a.y);
  write_matrix(out, "z", a.z);
}

Assignment read_assignment(std::istream& in) {
  std::string tag;
  std::size_t n = 0, r = 0, u = 0, q = 0;
  if (!(in >> tag >> n >> r >> u >> q) || tag != "assignment") {
    throw std::runtime_error("assignment dump: missing header");
  }
  Assignment a;
  a.x = read_matrix(in, "x", n, r);
  a.y = read_matrix(in, "y", n, u);
  a.z = read_matrix(in, "z", n, q);
  return a;
}

}  // namespace mtd
