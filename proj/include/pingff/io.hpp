#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pingff/gaussfield.hpp"
#include "pingff/lattice.hpp"
#include "pingff/pinning.hpp"

namespace pingff::io {

// bumped on breaking schema changes; parsers reject unknown majors
inline constexpr const char* kFormatVersion = "1.0";

std::string base64_encode(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> base64_decode(const std::string& text);

nlohmann::json environment_to_json(const lattice::Environment& env);
lattice::Environment environment_from_json(const nlohmann::json& j);

// CSV: site_index,x1,...,xd,phi
void field_to_csv(const lattice::BoxSpec& box, const gauss::FieldConfig& phi,
                  std::ostream& out);

// binary dump: magic "PGFFBIN1", u32 version, u32 d, u32 n, then
// n^d little-endian 64-bit floats in row-major site order
void field_to_binary(const lattice::BoxSpec& box, const gauss::FieldConfig& phi,
                     std::ostream& out);
gauss::FieldConfig field_from_binary(std::istream& in, lattice::BoxSpec& box);

nlohmann::json estimate_to_json(const lattice::BoxSpec& box, double a, double b,
                                double h, const pinning::FreeEnergyEstimate& est);

// appendable CSV with the same columns as the JSON record
std::string estimate_csv_header();
std::string estimate_csv_row(const lattice::BoxSpec& box, double a, double b,
                             double h, const pinning::FreeEnergyEstimate& est);

}  // namespace pingff::io
