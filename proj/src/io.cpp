#include "pingff/io.hpp"

#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace pingff::io {

namespace {

const char* kB64 =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int b64_value(char c) {
  if (c >= 'A' && c <= 'Z') return c - 'A';
  if (c >= 'a' && c <= 'z') return c - 'a' + 26;
  if (c >= '0' && c <= '9') return c - '0' + 52;
  if (c == '+') return 62;
  if (c == '/') return 63;
  throw std::invalid_argument("base64: bad character");
}

void check_version(const nlohmann::json& j) {
  const std::string v = j.at("format_version").get<std::string>();
  const std::string major = v.substr(0, v.find('.'));
  const std::string ours(kFormatVersion);
  if (major != ours.substr(0, ours.find('.')))
    throw std::runtime_error("unsupported format_version " + v);
}

}  // namespace

std::string base64_encode(const std::vector<std::uint8_t>& bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  for (std::size_t i = 0; i < bytes.size(); i += 3) {
    std::uint32_t word = bytes[i] << 16;
    if (i + 1 < bytes.size()) word |= bytes[i + 1] << 8;
    if (i + 2 < bytes.size()) word |= bytes[i + 2];
    out.push_back(kB64[(word >> 18) & 63]);
    out.push_back(kB64[(word >> 12) & 63]);
    out.push_back(i + 1 < bytes.size() ? kB64[(word >> 6) & 63] : '=');
    out.push_back(i + 2 < bytes.size() ? kB64[word & 63] : '=');
  }
  return out;
}

std::vector<std::uint8_t> base64_decode(const std::string& text) {
  if (text.size() % 4 != 0) throw std::invalid_argument("base64: bad length");
  std::vector<std::uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    int pad = 0;
    std::uint32_t word = 0;
    for (int k = 0; k < 4; ++k) {
      word <<= 6;
      if (text[i + k] == '=') {
        ++pad;
      } else {
        if (pad > 0) throw std::invalid_argument("base64: bad padding");
        word |= b64_value(text[i + k]);
      }
    }
    out.push_back((word >> 16) & 0xff);
    if (pad < 2) out.push_back((word >> 8) & 0xff);
    if (pad < 1) out.push_back(word & 0xff);
  }
  return out;
}

nlohmann::json environment_to_json(const lattice::Environment& env) {
  std::vector<std::uint8_t> bitmap((env.signs.size() + 7) / 8, 0);
  for (std::size_t x = 0; x < env.signs.size(); ++x)
    if (env.signs[x] > 0) bitmap[x / 8] |= (1u << (x % 8));
  return nlohmann::json{{"d", env.box.d},
                        {"n", env.box.n},
                        {"b", env.b},
                        {"h", env.h},
                        {"seed", env.seed},
                        {"signs", base64_encode(bitmap)},
                        {"format_version", kFormatVersion}};
}

lattice::Environment environment_from_json(const nlohmann::json& j) {
  check_version(j);
  lattice::Environment env;
  env.box = lattice::BoxSpec(j.at("d").get<int>(), j.at("n").get<int>());
  env.b = j.at("b").get<double>();
  env.h = j.at("h").get<double>();
  env.seed = j.at("seed").get<std::uint64_t>();
  const auto bitmap = base64_decode(j.at("signs").get<std::string>());
  const auto count = static_cast<std::size_t>(env.box.site_count());
  if (bitmap.size() != (count + 7) / 8)
    throw std::runtime_error("environment_from_json: bitmap size mismatch");
  env.signs.resize(count);
  for (std::size_t x = 0; x < count; ++x)
    env.signs[x] = (bitmap[x / 8] >> (x % 8)) & 1u ? 1 : -1;
  return env;
}

void field_to_csv(const lattice::BoxSpec& box, const gauss::FieldConfig& phi,
                  std::ostream& out) {
  out << "site_index";
  for (int i = 1; i <= box.d; ++i) out << ",x" << i;
  out << ",phi\n";
  char buf[64];
  for (lattice::SiteIndex x = 0; x < box.site_count(); ++x) {
    out << x;
    for (int c : box.coords(x)) out << ',' << c;
    std::snprintf(buf, sizeof buf, "%.17g", phi[x]);
    out << ',' << buf << '\n';
  }
}

void field_to_binary(const lattice::BoxSpec& box, const gauss::FieldConfig& phi,
                     std::ostream& out) {
  out.write("PGFFBIN1", 8);
  const std::uint32_t header[3] = {1u, static_cast<std::uint32_t>(box.d),
                                   static_cast<std::uint32_t>(box.n)};
  out.write(reinterpret_cast<const char*>(header), sizeof header);
  // doubles are written little-endian; this build targets LE hosts
  out.write(reinterpret_cast<const char*>(phi.data()),
            static_cast<std::streamsize>(sizeof(double) * phi.size()));
}

gauss::FieldConfig field_from_binary(std::istream& in, lattice::BoxSpec& box) {
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, "PGFFBIN1", 8) != 0)
    throw std::runtime_error("field_from_binary: bad magic");
  std::uint32_t header[3];
  in.read(reinterpret_cast<char*>(header), sizeof header);
  if (!in || header[0] != 1u)
    throw std::runtime_error("field_from_binary: unsupported version");
  box = lattice::BoxSpec(static_cast<int>(header[1]), static_cast<int>(header[2]));
  gauss::FieldConfig phi(box.site_count());
  in.read(reinterpret_cast<char*>(phi.data()),
          static_cast<std::streamsize>(sizeof(double) * phi.size()));
  if (!in) throw std::runtime_error("field_from_binary: truncated payload");
  return phi;
}

nlohmann::json estimate_to_json(const lattice::BoxSpec& box, double a, double b,
                                double h, const pinning::FreeEnergyEstimate& est) {
  return nlohmann::json{{"d", box.d},
                        {"n", box.n},
                        {"a", a},
                        {"b", b},
                        {"h", h},
                        {"seed", est.seed},
                        {"estimator", est.estimator},
                        {"value", est.value},
                        {"stderr", est.stderr_},
                        {"n_samples", est.n_samples},
                        {"flags", est.flags},
                        {"format_version", kFormatVersion}};
}

std::string estimate_csv_header() {
  return "d,n,a,b,h,seed,estimator,value,stderr,n_samples,flags,format_version";
}

std::string estimate_csv_row(const lattice::BoxSpec& box, double a, double b,
                             double h, const pinning::FreeEnergyEstimate& est) {
  std::ostringstream out;
  out.precision(17);
  out << box.d << ',' << box.n << ',' << a << ',' << b << ',' << h << ','
      << est.seed << ',' << est.estimator << ',' << est.value << ','
      << est.stderr_ << ',' << est.n_samples << ',';
  for (std::size_t i = 0; i < est.flags.size(); ++i)
    out << (i ? ";" : "") << est.flags[i];
  out << ',' << kFormatVersion;
  return out.str();
}

}  // namespace pingff::io
