#include "qdsim/fock.hpp"

#include <bit>
#include <cstdlib>
#include <sstream>

namespace qdsim {

SpinSite::SpinSite(int site_, Spin spin_) : site(site_), spin(spin_) {
  if (site_ < 0 || site_ >= kNumSites) {
    throw std::out_of_range("SpinSite: site " + std::to_string(site_) + " outside [0, 3)");
  }
}

int FockState::electrons() const { return std::popcount(static_cast<unsigned>(bits_)); }

int FockState::site_occupancy(int site) const {
  return static_cast<int>(occupied(2 * site)) + static_cast<int>(occupied(2 * site + 1));
}

int FockState::sz2() const {
  constexpr unsigned kUpMask = 0b010101;
  const int up = std::popcount(static_cast<unsigned>(bits_) & kUpMask);
  return up - (electrons() - up);
}

int FockState::sign_before(int mode) const {
  const unsigned below = static_cast<unsigned>(bits_) & ((1u << mode) - 1u);
  return (std::popcount(below) & 1) ? -1 : 1;
}

FockState FockState::with(int mode, bool occ) const {
  const auto mask = static_cast<std::uint8_t>(1u << mode);
  return FockState(static_cast<std::uint8_t>(occ ? (bits_ | mask) : (bits_ & ~mask)));
}

std::string FockState::label() const {
  std::string out;
  for (int site = 0; site < kNumSites; ++site) {
    const bool up = occupied(2 * site);
    const bool dn = occupied(2 * site + 1);
    out += up && dn ? '2' : up ? 'u' : dn ? 'd' : '0';
  }
  return out;
}

Sector sector_of(FockState s) { return {s.electrons(), s.sz2()}; }

FockBasis::FockBasis() : FockBasis(std::optional<Sector>{}) {}

FockBasis::FockBasis(std::optional<Sector> sector) : sector_(sector) {
  lookup_.fill(-1);
  for (int bits = 0; bits < kFullDimension; ++bits) {
    const FockState s(static_cast<std::uint8_t>(bits));
    if (sector && !sector->contains(s)) continue;
    lookup_[bits] = static_cast<int>(states_.size());
    states_.push_back(s);
  }
}

std::optional<std::size_t> FockBasis::index_of(FockState s) const {
  const int i = lookup_[s.bits()];
  if (i < 0) return std::nullopt;
  return static_cast<std::size_t>(i);
}

FockBasis build_basis(std::optional<Sector> sector) {
  if (sector) {
    const int n = sector->electrons;
    const int sz = sector->sz2;
    if (n < 0 || n > kNumModes) {
      throw SectorError("electron number " + std::to_string(n) + " outside [0, 6]");
    }
    const int max_sz = std::min(n, kNumModes - n);
    if (std::abs(sz) > max_sz || ((n - sz) & 1) != 0) {
      throw SectorError("empty sector: N=" + std::to_string(n) + ", Sz=" + std::to_string(sz) +
                        "/2");
    }
  }
  return FockBasis(sector);
}

namespace {

std::string describe(const FockBasis& b) {
  if (!b.sector()) return "full space";
  return "sector (N=" + std::to_string(b.sector()->electrons) +
         ", Sz=" + std::to_string(b.sector()->sz2) + "/2)";
}

}  // namespace

OperatorMatrix creation_operator(const FockBasis& basis_in, const FockBasis& basis_out,
                                 SpinSite mode) {
  const auto& in = basis_in.sector();
  const auto& out = basis_out.sector();
  if (in.has_value() != out.has_value()) {
    throw DimensionError("creation operator: cannot map " + describe(basis_in) + " to " +
                         describe(basis_out));
  }
  if (in) {
    const int dsz = mode.spin == Spin::up ? 1 : -1;
    if (out->electrons != in->electrons + 1 || out->sz2 != in->sz2 + dsz) {
      throw DimensionError("creation operator: " + describe(basis_out) +
                           " is not the image of " + describe(basis_in));
    }
  }

  const int m = mode.mode();
  Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(basis_out.size()),
                                                static_cast<Eigen::Index>(basis_in.size()));
  for (std::size_t j = 0; j < basis_in.size(); ++j) {
    const FockState s = basis_in[j];
    if (s.occupied(m)) continue;
    const auto i = basis_out.index_of(s.with(m, true));
    if (!i) continue;
    mat(static_cast<Eigen::Index>(*i), static_cast<Eigen::Index>(j)) = s.sign_before(m);
  }
  return {basis_out, basis_in, std::move(mat)};
}

OperatorMatrix annihilation_operator(const FockBasis& basis_in, const FockBasis& basis_out,
                                     SpinSite mode) {
  OperatorMatrix cdag = creation_operator(basis_out, basis_in, mode);
  return {basis_out, basis_in, cdag.matrix.adjoint()};
}

OperatorMatrix number_operator(const FockBasis& basis, SpinSite mode) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    mat(i, i) = basis[static_cast<std::size_t>(i)].occupied(mode) ? 1.0 : 0.0;
  }
  return {basis, basis, std::move(mat)};
}

std::string Encoding::name() const {
  if (variant == Variant::two_electron) return "two-electron";
  return fixed_spin == Spin::up ? "single-electron" : "single-electron:down";
}

Encoding parse_encoding(const std::string& text) {
  if (text == "two-electron" || text == "two_electron") return Encoding::two_electron();
  if (text == "single-electron" || text == "single_electron" || text == "single-electron:up") {
    return Encoding::single_electron(Spin::up);
  }
  if (text == "single-electron:down") return Encoding::single_electron(Spin::down);
  throw std::invalid_argument("unknown encoding '" + text + "'");
}

LogicalBits LogicalBits::with(int dot, int value) const {
  LogicalBits out = *this;
  (dot == 0 ? out.c : dot == 1 ? out.t1 : out.t2) = value;
  return out;
}

std::string LogicalBits::str() const {
  return std::to_string(c) + std::to_string(t1) + std::to_string(t2);
}

int dot_configuration(int bit, Encoding encoding) {
  if (bit != 0) return 0;
  if (encoding.variant == Encoding::Variant::two_electron) return 0b11;
  return encoding.fixed_spin == Spin::up ? 0b01 : 0b10;
}

FockState logical_to_fock(LogicalBits bits, Encoding encoding) {
  unsigned occ = 0;
  for (int dot = 0; dot < kNumSites; ++dot) {
    occ |= static_cast<unsigned>(dot_configuration(bits.bit(dot), encoding)) << (2 * dot);
  }
  return FockState(static_cast<std::uint8_t>(occ));
}

std::optional<LogicalBits> fock_to_logical(FockState state, Encoding encoding) {
  const int zero_conf = dot_configuration(0, encoding);
  LogicalBits out;
  for (int dot = 0; dot < kNumSites; ++dot) {
    const int conf = (state.bits() >> (2 * dot)) & 0b11;
    int bit = 0;
    if (conf == 0) {
      bit = 1;
    } else if (conf != zero_conf) {
      return std::nullopt;
    }
    out = out.with(dot, bit);
  }
  return out;
}

}  // namespace qdsim
