#pragma once

#include <filesystem>
#include <iosfwd>
#include <json.hpp>
#include <string>
#include <vector>

#include "gwn/basis.hpp"

namespace gwn {

struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

struct PointData {
  PointSetd points;
  std::vector<std::string> names;  // header names, or defaults
};

/// CSV with an optional header row of variable names.
PointData parse_points_csv(std::istream& in);
/// Either [[...], ...] or {"variables": [...], "points": [[...], ...]}.
PointData parse_points_json(const nlohmann::json& j);
/// Chooses the format from the extension (.json) or the first character.
PointData read_points(const std::filesystem::path& path);

void write_points_csv(std::ostream& out, const PointSetd& X, const std::vector<std::string>& names);

/// "degrevlex", "deglex:y,x", "degrevlex:x,y,z"; names list the precedence, greatest first.
TermOrdering parse_ordering(const std::string& spec, const std::vector<std::string>& names);
std::string ordering_to_string(const TermOrdering& ord, const std::vector<std::string>& names);

nlohmann::json basis_to_json(const BasisResult& result, const std::vector<std::string>& names);
BasisResult basis_from_json(const nlohmann::json& j, std::vector<std::string>* names = nullptr);

BasisResult read_basis(const std::filesystem::path& path, std::vector<std::string>* names = nullptr);
void write_basis(const std::filesystem::path& path, const BasisResult& result, const std::vector<std::string>& names);

/// Human-readable summary with 4 significant digits.
std::string basis_summary(const BasisResult& result, const std::vector<std::string>& names, bool trace = false);

std::string verification_summary(const VerificationReport& report);

}  // namespace gwn
