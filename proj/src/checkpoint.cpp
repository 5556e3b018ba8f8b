#include "gbo/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include "gbo/error.hpp"

namespace gbo {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes little-endian");

namespace {

constexpr char kMagic[4] = {'G', 'B', 'O', '1'};

template <class T>
void put(std::vector<char>& buf, T v) {
  const char* p = reinterpret_cast<const char*>(&v);
  buf.insert(buf.end(), p, p + sizeof(T));
}

class Reader {
 public:
  Reader(const std::vector<char>& b, const std::string& path) : buf_(b), path_(path) {}
  template <class T>
  T get() {
    if (pos_ + sizeof(T) > buf_.size())
      throw FormatError("checkpoint '" + path_ + "' is truncated");
    T v;
    std::memcpy(&v, buf_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::size_t remaining() const { return buf_.size() - pos_; }

 private:
  const std::vector<char>& buf_;
  const std::string& path_;
  std::size_t pos_ = 0;
};

}  // namespace

void write_checkpoint(const SimState& s, const std::string& path) {
  const TorusGrid& g = s.u.grid();
  std::vector<char> buf(kMagic, kMagic + 4);
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(g.size()));
  put<double>(buf, g.length());
  put<double>(buf, s.t);
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(s.k));
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(g.pad_factor()));
  for (const cplx& c : s.u.coeffs()) {
    put<double>(buf, c.real());
    put<double>(buf, c.imag());
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!os) throw std::runtime_error("failed writing '" + path + "'");
}

SimState read_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open checkpoint '" + path + "'");
  const std::vector<char> buf((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  if (buf.size() < 4 || std::memcmp(buf.data(), kMagic, 4) != 0)
    throw FormatError("checkpoint '" + path + "' has bad magic, expected \"GBO1\"");
  Reader r(buf, path);
  for (int i = 0; i < 4; ++i) r.get<char>();
  const std::uint32_t n = r.get<std::uint32_t>();
  const double L = r.get<double>();
  const double t = r.get<double>();
  const std::uint32_t k = r.get<std::uint32_t>();
  const std::uint32_t pad = r.get<std::uint32_t>();
  if (r.remaining() < static_cast<std::size_t>(n) * 16)
    throw FormatError("checkpoint '" + path + "' is truncated");
  if (r.remaining() > static_cast<std::size_t>(n) * 16)
    throw FormatError("checkpoint '" + path + "' has trailing bytes");
  GridPtr grid;
  try {
    grid = make_grid(n, L, pad);
  } catch (const InvalidArgument& e) {
    throw FormatError("checkpoint '" + path + "' has invalid header: " + e.what());
  }
  std::vector<cplx> coeffs(n);
  for (auto& c : coeffs) {
    const double re = r.get<double>();
    const double im = r.get<double>();
    c = cplx(re, im);
  }
  return SimState{t, SpectralField(grid, std::move(coeffs)), static_cast<int>(k), 0};
}

}  // namespace gbo
