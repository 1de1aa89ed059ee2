#include "wavescope/npy.hpp"

#include <bit>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "wavescope/error.hpp"

namespace wavescope {
namespace {

constexpr unsigned char kMagic[6] = {0x93, 'N', 'U', 'M', 'P', 'Y'};
constexpr std::size_t kPreamble = 10;  // magic + version + header length

static_assert(std::endian::native == std::endian::little,
              "NPY payloads are read in place; big-endian hosts need byte swapping");

// Minimal scanner for the python dict literal numpy writes, e.g.
// {'descr': '<f8', 'fortran_order': False, 'shape': (2, 4, 16, 16), }
class DictScanner {
 public:
  explicit DictScanner(const std::string& text) : s_(text) {}

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool consume(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!consume(c)) fail(std::string("expected '") + c + "'");
  }
  std::string quoted() {
    skip_ws();
    if (pos_ >= s_.size() || (s_[pos_] != '\'' && s_[pos_] != '"')) fail("expected string");
    const char q = s_[pos_++];
    const auto end = s_.find(q, pos_);
    if (end == std::string::npos) fail("unterminated string");
    std::string out = s_.substr(pos_, end - pos_);
    pos_ = end + 1;
    return out;
  }
  bool boolean() {
    skip_ws();
    if (s_.compare(pos_, 4, "True") == 0) {
      pos_ += 4;
      return true;
    }
    if (s_.compare(pos_, 5, "False") == 0) {
      pos_ += 5;
      return false;
    }
    fail("expected True/False");
  }
  std::vector<std::size_t> tuple() {
    expect('(');
    std::vector<std::size_t> dims;
    while (!consume(')')) {
      skip_ws();
      std::size_t v = 0;
      bool any = false;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        v = v * 10 + static_cast<std::size_t>(s_[pos_++] - '0');
        any = true;
      }
      if (!any) fail("expected integer in shape");
      // numpy may write 'L' suffixes in very old files
      consume('L');
      dims.push_back(v);
      if (!consume(',')) {
        expect(')');
        break;
      }
    }
    return dims;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= s_.size();
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(Errc::MalformedHeader, what + " at offset " + std::to_string(pos_));
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;
};

std::string shape_literal(const std::array<std::size_t, 4>& shape) {
  std::ostringstream os;
  os << '(' << shape[0] << ", " << shape[1] << ", " << shape[2] << ", " << shape[3] << ')';
  return os.str();
}

}  // namespace

std::string to_string(Dtype dtype) { return dtype == Dtype::f32 ? "f32" : "f64"; }

Dtype parse_dtype(const std::string& text) {
  if (text == "f32") return Dtype::f32;
  if (text == "f64") return Dtype::f64;
  throw Error(Errc::UnsupportedDtype, "dtype '" + text + "' (expected f32 or f64)");
}

NpyHeader parse_npy_header(const std::string& dict) {
  DictScanner sc(dict);
  NpyHeader header;
  bool have_descr = false, have_order = false, have_shape = false;
  sc.expect('{');
  while (!sc.consume('}')) {
    const std::string key = sc.quoted();
    sc.expect(':');
    if (key == "descr") {
      const std::string descr = sc.quoted();
      if (descr == "<f8") {
        header.dtype = Dtype::f64;
      } else if (descr == "<f4") {
        header.dtype = Dtype::f32;
      } else {
        throw Error(Errc::UnsupportedDtype, "descr '" + descr + "' (only <f4 and <f8 are read)");
      }
      have_descr = true;
    } else if (key == "fortran_order") {
      header.fortran_order = sc.boolean();
      have_order = true;
    } else if (key == "shape") {
      header.shape = sc.tuple();
      have_shape = true;
    } else {
      sc.fail("unexpected key '" + key + "'");
    }
    if (!sc.consume(',')) {
      sc.expect('}');
      break;
    }
  }
  if (!have_descr || !have_order || !have_shape) {
    throw Error(Errc::MalformedHeader, "header dict must contain descr, fortran_order and shape");
  }
  return header;
}

Tensor4 read_npy_bytes(std::span<const unsigned char> bytes) {
  if (bytes.size() < 6 || std::memcmp(bytes.data(), kMagic, 6) != 0) {
    throw Error(Errc::BadMagic, "not an NPY file");
  }
  if (bytes.size() < kPreamble) throw Error(Errc::MalformedHeader, "truncated preamble");
  if (bytes[6] != 1 || bytes[7] != 0) {
    throw Error(Errc::UnsupportedVersion, "NPY version " + std::to_string(bytes[6]) + "." +
                                              std::to_string(bytes[7]) + " (only 1.0 is read)");
  }
  const std::size_t header_len = static_cast<std::size_t>(bytes[8]) | (static_cast<std::size_t>(bytes[9]) << 8);
  if (bytes.size() < kPreamble + header_len) throw Error(Errc::MalformedHeader, "truncated header");
  const std::string dict(reinterpret_cast<const char*>(bytes.data() + kPreamble), header_len);
  const NpyHeader header = parse_npy_header(dict);

  if (header.fortran_order) throw Error(Errc::UnsupportedOrder, "fortran_order=True is not supported");
  if (header.shape.size() != 4) {
    throw Error(Errc::ShapeMismatch, "expected 4 dimensions, found " + std::to_string(header.shape.size()));
  }

  Tensor4 t;
  std::copy(header.shape.begin(), header.shape.end(), t.shape.begin());
  t.source_dtype = header.dtype;
  const std::size_t count = t.size();
  const std::size_t width = header.dtype == Dtype::f64 ? 8 : 4;
  const auto payload = bytes.subspan(kPreamble + header_len);
  if (payload.size() != count * width) {
    throw Error(Errc::MalformedHeader, "payload holds " + std::to_string(payload.size()) + " bytes, shape needs " +
                                           std::to_string(count * width));
  }
  t.data.resize(count);
  if (header.dtype == Dtype::f64) {
    std::memcpy(t.data.data(), payload.data(), payload.size());
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      float v;
      std::memcpy(&v, payload.data() + i * 4, 4);
      t.data[i] = static_cast<double>(v);
    }
  }
  return t;
}

Tensor4 read_npy(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return read_npy_bytes(bytes);
}

std::vector<unsigned char> write_npy_bytes(const Tensor4& tensor, Dtype dtype) {
  if (tensor.data.size() != tensor.size()) {
    throw Error(Errc::ShapeMismatch, "tensor data does not match its shape");
  }
  std::string dict = std::string("{'descr': '") + (dtype == Dtype::f64 ? "<f8" : "<f4") +
                     "', 'fortran_order': False, 'shape': " + shape_literal(tensor.shape) + ", }";
  // payload on a 64-byte boundary
  std::size_t total = kPreamble + dict.size() + 1;
  dict.append((64 - total % 64) % 64, ' ');
  dict.push_back('\n');

  std::vector<unsigned char> out(std::begin(kMagic), std::end(kMagic));
  out.push_back(1);
  out.push_back(0);
  out.push_back(static_cast<unsigned char>(dict.size() & 0xff));
  out.push_back(static_cast<unsigned char>(dict.size() >> 8));
  out.insert(out.end(), dict.begin(), dict.end());

  const std::size_t width = dtype == Dtype::f64 ? 8 : 4;
  const std::size_t base = out.size();
  out.resize(base + tensor.data.size() * width);
  if (dtype == Dtype::f64) {
    std::memcpy(out.data() + base, tensor.data.data(), tensor.data.size() * 8);
  } else {
    for (std::size_t i = 0; i < tensor.data.size(); ++i) {
      const auto v = static_cast<float>(tensor.data[i]);
      std::memcpy(out.data() + base + i * 4, &v, 4);
    }
  }
  return out;
}

void write_npy(const std::filesystem::path& path, const Tensor4& tensor, Dtype dtype) {
  const auto bytes = write_npy_bytes(tensor, dtype);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::IoError, "short write to " + path.string());
}

}  // namespace wavescope
