#include "wmlab/serialize.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "wmlab/errors.hpp"

namespace wmlab {
namespace {

static_assert(std::endian::native == std::endian::little,
              "binary layout assumes a little-endian host");

template <class T>
void put(std::ostream& out, T v) {
  std::array<char, sizeof(T)> buf;
  std::memcpy(buf.data(), &v, sizeof(T));
  out.write(buf.data(), buf.size());
}

template <class T>
T get(std::istream& in) {
  std::array<char, sizeof(T)> buf;
  if (!in.read(buf.data(), buf.size())) throw InvalidArgument("binary read: truncated stream");
  T v;
  std::memcpy(&v, buf.data(), sizeof(T));
  return v;
}

void write_payload(std::ostream& out, const char* magic, const PhaseSpaceGrid& g, const CMatrix& m) {
  out.write(magic, 4);
  put<std::int32_t>(out, g.points());
  put<double>(out, g.half_extent());
  put<double>(out, g.hbar());
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) {
      put<double>(out, m(r, c).real());
      put<double>(out, m(r, c).imag());
    }
}

std::pair<PhaseSpaceGrid, CMatrix> read_payload(std::istream& in, const char* magic) {
  char tag[4];
  if (!in.read(tag, 4) || std::memcmp(tag, magic, 4) != 0)
    throw InvalidArgument(std::string("binary read: expected magic ") + std::string(magic, 4));
  const auto n = get<std::int32_t>(in);
  const auto L = get<double>(in);
  const auto hbar = get<double>(in);
  PhaseSpaceGrid g(L, n, hbar);
  CMatrix m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const double re = get<double>(in);
      const double im = get<double>(in);
      m(r, c) = cplx(re, im);
    }
  return {g, std::move(m)};
}

}  // namespace

void write_binary(std::ostream& out, const Symbol& s) {
  write_payload(out, "WMSY", s.grid(), s.values());
}

void write_binary(std::ostream& out, const OperatorMatrix& m) {
  write_payload(out, "WMOP", m.grid(), m.entries());
}

Symbol read_symbol_binary(std::istream& in) {
  auto [g, m] = read_payload(in, "WMSY");
  return Symbol(g, std::move(m));
}

OperatorMatrix read_operator_binary(std::istream& in) {
  auto [g, m] = read_payload(in, "WMOP");
  return OperatorMatrix(g, std::move(m));
}

void save_binary(const std::string& path, const Symbol& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot open " + path + " for writing");
  write_binary(out, s);
}

Symbol load_symbol(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path);
  return read_symbol_binary(in);
}

void write_csv(std::ostream& out, const Symbol& s) {
  const auto& g = s.grid();
  out << "q,p,re,im\n" << std::setprecision(17);
  for (int j = 0; j < g.points(); ++j)
    for (int k = 0; k < g.points(); ++k)
      out << g.q(j) << ',' << g.p(k) << ',' << s(j, k).real() << ',' << s(j, k).imag() << '\n';
}

}  // namespace wmlab
