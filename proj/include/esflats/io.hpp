#pragma once

// JSON documents. Every document carries "format": 1 and a "kind" tag. Exact
// rationals are strings "p/q" while floating point data stays numeric.
// Malformed documents raise InputError.

#include <json.hpp>

#include <string>
#include <vector>

#include "esflats/convexpos.hpp"
#include "esflats/eskit.hpp"
#include "esflats/grassmann.hpp"
#include "esflats/nonconvex.hpp"

namespace esflats::io {

using Json = nlohmann::ordered_json;

inline constexpr int kFormat = 1;

Json to_json(const Rat& q);
Json to_json(const RVec& v);
Json to_json(const geom::Flat& f);
Json to_json(const geom::Hyperplane& h);

Rat rat_from_json(const Json& j);
RVec rvec_from_json(const Json& j);
geom::Flat flat_from_json(const Json& j);
geom::Hyperplane hyperplane_from_json(const Json& j);

/// Checks "format" and, when `kind` is non-empty, the "kind" tag.
void expect_document(const Json& doc, const std::string& kind);

Json points_document(const std::vector<RVec>& pts);
/// Accepts "points" documents and "flats" documents with k = 0.
std::vector<RVec> read_points(const Json& doc);

Json flats_document(const std::vector<geom::Flat>& flats);
std::vector<geom::Flat> read_flats(const Json& doc);

Json hyperplanes_document(const std::vector<geom::Hyperplane>& hps);
/// Accepts "hyperplanes" and "octa_family" documents.
std::vector<geom::Hyperplane> read_hyperplanes(const Json& doc);

Json certificate_document(const convexpos::ConvexityCertificate& c);
convexpos::ConvexityCertificate read_certificate(const Json& doc);

Json octa_document(const nonconvex::OctaFamily& fam);
nonconvex::OctaFamily read_octa(const Json& doc);

Json net_document(const gr::EpsNet& net);
gr::EpsNet read_net(const Json& doc);

/// {"generators": [...]} or {"halfspaces": [...]}, rows of numbers.
Json cone_document(const nonconvex::Cone& cone);
nonconvex::Cone read_cone(const Json& doc);

Json refutation_document(const nonconvex::Refutation& r);
Json extraction_document(const eskit::ExtractionResult& r);
Json section_document(const nonconvex::SectionResult& s);
Json verdict_document(bool convex, bool certified, const std::string& note);

/// Parses a file; I/O and syntax problems become InputError.
Json read_file(const std::string& path);
/// Two-space indented text with a trailing newline.
std::string dump(const Json& doc);

}  // namespace esflats::io
