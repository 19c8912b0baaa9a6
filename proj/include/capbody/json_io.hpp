#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "capbody/bounds.hpp"
#include "capbody/constructions.hpp"
#include "capbody/covering.hpp"
#include "capbody/piercing.hpp"
#include "capbody/spiky.hpp"

namespace capbody {

// Serialization of the on-disk formats.  Loaders validate shape and content
// and throw std::invalid_argument with a readable reason.

nlohmann::json instance_to_json(const SpikyBall& ball);
SpikyBall instance_from_json(const nlohmann::json& j,
                             const Tolerance& tol = Tolerance());

nlohmann::json cover_to_json(const CoveringSpec& spec);
CoveringSpec cover_from_json(const nlohmann::json& j);

nlohmann::json directions_to_json(const DirectionSet& dirs);
DirectionSet directions_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const IlluminationReport& report);
nlohmann::json cover_report_to_json(const CoverReport& report);
nlohmann::json piercing_to_json(const PiercingSolution& sol);
nlohmann::json construction_to_json(const ConstructionResult& result);

// Fixed 9-column CSV with full round-trip precision.
void write_bounds_csv(std::ostream& out, const std::vector<BoundsRow>& rows);

nlohmann::json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const nlohmann::json& j);

std::string symmetry_name(Symmetry s);
Symmetry symmetry_from_name(const std::string& name);

}  // namespace capbody
