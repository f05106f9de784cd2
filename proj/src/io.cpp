#include "esflats/io.hpp"

#include <fstream>
#include <sstream>
#include <variant>

#include "esflats/error.hpp"

namespace esflats::io {

namespace {

template <class F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed ") + what + ": " + e.what());
  }
}

Json doc(const char* kind) {
  Json j;
  j["format"] = kFormat;
  j["kind"] = kind;
  return j;
}

Json doubles(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Json doubles(const std::vector<double>& v) { return Json(v); }

Eigen::VectorXd vec_from_json(const Json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<Eigen::VectorXd> rows_from_json(const Json& j) {
  std::vector<Eigen::VectorXd> out;
  for (const auto& r : j) out.push_back(vec_from_json(r));
  return out;
}

Json points_json(const std::vector<RVec>& pts) {
  Json a = Json::array();
  for (const auto& p : pts) a.push_back(to_json(p));
  return a;
}

std::vector<RVec> points_from_json(const Json& j) {
  std::vector<RVec> out;
  for (const auto& p : j) out.push_back(rvec_from_json(p));
  return out;
}

Json indices(const std::vector<std::size_t>& v) { return Json(v); }

}  // namespace

Json to_json(const Rat& q) { return format_rat(q); }

Json to_json(const RVec& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(format_rat(x));
  return a;
}

Json to_json(const geom::Flat& f) {
  Json j;
  j["d"] = f.ambient_dim();
  j["k"] = f.dim();
  j["base"] = to_json(f.base());
  j["dirs"] = points_json(f.dirs());
  return j;
}

Json to_json(const geom::Hyperplane& h) {
  Json j;
  j["normal"] = to_json(h.normal());
  j["offset"] = to_json(h.offset());
  return j;
}

Rat rat_from_json(const Json& j) {
  if (j.is_string()) return parse_rat(j.get<std::string>());
  if (j.is_number_integer()) return Rat(j.get<long>());
  throw InputError("rational must be a string \"p/q\" or an integer");
}

RVec rvec_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("expected an array of rationals");
  RVec v;
  for (const auto& x : j) v.push_back(rat_from_json(x));
  return v;
}

geom::Flat flat_from_json(const Json& j) {
  return guarded("flat", [&] {
    geom::Flat f(rvec_from_json(j.at("base")), points_from_json(j.at("dirs")));
    if (j.contains("d") && j.at("d").get<std::size_t>() != f.ambient_dim())
      throw InputError("flat: \"d\" disagrees with the base");
    if (j.contains("k") && j.at("k").get<std::size_t>() != f.dim())
      throw InputError("flat: \"k\" disagrees with the directions");
    for (const auto& dir : f.dirs())
      if (dir.size() != f.ambient_dim()) throw InputError("flat: direction of wrong length");
    return f;
  });
}

geom::Hyperplane hyperplane_from_json(const Json& j) {
  return guarded("hyperplane", [&] { return geom::Hyperplane(rvec_from_json(j.at("normal")), rat_from_json(j.at("offset"))); });
}

void expect_document(const Json& doc, const std::string& kind) {
  if (!doc.is_object()) throw InputError("document must be a JSON object");
  if (!doc.contains("format") || doc["format"] != kFormat) throw InputError("unsupported or missing \"format\" (expected 1)");
  if (!kind.empty() && (!doc.contains("kind") || doc["kind"] != kind))
    throw InputError("expected a document of kind \"" + kind + "\"");
}

namespace {

std::string kind_of(const Json& d) {
  expect_document(d, "");
  if (!d.contains("kind") || !d["kind"].is_string()) throw InputError("document has no \"kind\"");
  return d["kind"].get<std::string>();
}

template <class T>
void same_dimension(const std::vector<T>& xs, std::size_t (T::*dim)() const, const char* what) {
  for (const auto& x : xs)
    if ((x.*dim)() != (xs.front().*dim)()) throw InputError(std::string(what) + " of mixed dimensions");
}

}  // namespace

Json points_document(const std::vector<RVec>& pts) {
  Json j = doc("points");
  j["d"] = pts.empty() ? 0 : pts.front().size();
  j["points"] = points_json(pts);
  return j;
}

std::vector<RVec> read_points(const Json& d) {
  const auto kind = kind_of(d);
  if (kind == "flats") {
    std::vector<RVec> pts;
    for (const auto& f : read_flats(d)) {
      if (f.dim() != 0) throw InputError("flats document is not made of points (k = 0)");
      pts.push_back(f.base());
    }
    return pts;
  }
  if (kind != "points") throw InputError("expected a points document, got \"" + kind + "\"");
  return guarded("points", [&] {
    auto pts = points_from_json(d.at("points"));
    for (const auto& p : pts)
      if (p.size() != pts.front().size()) throw InputError("points of mixed dimensions");
    return pts;
  });
}

Json flats_document(const std::vector<geom::Flat>& flats) {
  Json j = doc("flats");
  j["d"] = flats.empty() ? 0 : flats.front().ambient_dim();
  j["k"] = flats.empty() ? 0 : flats.front().dim();
  Json a = Json::array();
  for (const auto& f : flats) a.push_back(to_json(f));
  j["flats"] = std::move(a);
  return j;
}

std::vector<geom::Flat> read_flats(const Json& d) {
  expect_document(d, "flats");
  return guarded("flats", [&] {
    std::vector<geom::Flat> out;
    for (const auto& f : d.at("flats")) out.push_back(flat_from_json(f));
    same_dimension(out, &geom::Flat::ambient_dim, "flats");
    same_dimension(out, &geom::Flat::dim, "flats");
    return out;
  });
}

Json hyperplanes_document(const std::vector<geom::Hyperplane>& hps) {
  Json j = doc("hyperplanes");
  j["d"] = hps.empty() ? 0 : hps.front().ambient_dim();
  Json a = Json::array();
  for (const auto& h : hps) a.push_back(to_json(h));
  j["hyperplanes"] = std::move(a);
  return j;
}

std::vector<geom::Hyperplane> read_hyperplanes(const Json& d) {
  const auto kind = kind_of(d);
  if (kind != "hyperplanes" && kind != "octa_family")
    throw InputError("expected a hyperplanes document, got \"" + kind + "\"");
  return guarded("hyperplanes", [&] {
    std::vector<geom::Hyperplane> out;
    for (const auto& h : d.at("hyperplanes")) out.push_back(hyperplane_from_json(h));
    same_dimension(out, &geom::Hyperplane::ambient_dim, "hyperplanes");
    return out;
  });
}

Json certificate_document(const convexpos::ConvexityCertificate& c) {
  Json j = doc("certificate");
  j["d"] = c.d;
  j["k"] = c.k;
  Json flats = Json::array(), touch = Json::array(), supports = Json::array();
  for (const auto& f : c.flats) flats.push_back(to_json(f));
  for (const auto& t : c.touch_sets) touch.push_back(points_json(t));
  for (const auto& h : c.supports) supports.push_back(to_json(h));
  j["flats"] = std::move(flats);
  j["touch_sets"] = std::move(touch);
  j["supports"] = std::move(supports);
  j["interior_block"] = points_json(c.interior_block);
  return j;
}

convexpos::ConvexityCertificate read_certificate(const Json& d) {
  expect_document(d, "certificate");
  return guarded("certificate", [&] {
    convexpos::ConvexityCertificate c;
    c.d = d.at("d").get<std::size_t>();
    c.k = d.at("k").get<std::size_t>();
    for (const auto& f : d.at("flats")) c.flats.push_back(flat_from_json(f));
    for (const auto& t : d.at("touch_sets")) c.touch_sets.push_back(points_from_json(t));
    for (const auto& h : d.at("supports")) c.supports.push_back(hyperplane_from_json(h));
    c.interior_block = points_from_json(d.at("interior_block"));
    return c;
  });
}

Json octa_document(const nonconvex::OctaFamily& fam) {
  Json j = doc("octa_family");
  j["d"] = fam.d;
  j["seed"] = fam.seed;
  j["magnitude"] = to_json(fam.magnitude);
  Json a = Json::array();
  for (const auto& h : fam.hyperplanes) a.push_back(to_json(h));
  j["hyperplanes"] = std::move(a);
  return j;
}

nonconvex::OctaFamily read_octa(const Json& d) {
  expect_document(d, "octa_family");
  return guarded("octa family", [&] {
    nonconvex::OctaFamily fam;
    fam.d = d.at("d").get<std::size_t>();
    fam.seed = d.at("seed").get<std::uint64_t>();
    fam.magnitude = rat_from_json(d.at("magnitude"));
    fam.hyperplanes = read_hyperplanes(d);
    if (fam.d < 2 || fam.hyperplanes.size() != fam.d + (std::size_t{1} << fam.d))
      throw InputError("octa family must hold d + 2^d hyperplanes");
    for (const auto& h : fam.hyperplanes)
      if (h.ambient_dim() != fam.d) throw InputError("octa family hyperplane of wrong dimension");
    return fam;
  });
}

Json net_document(const gr::EpsNet& net) {
  Json j = doc("eps_net");
  j["d"] = net.d;
  j["k"] = net.k;
  j["eps"] = net.eps;
  j["seed"] = net.seed;
  j["audit"] = {{"samples", net.audit.samples}, {"max_observed_gap", net.audit.max_observed_gap}};
  Json els = Json::array();
  for (const auto& s : net.elements) {
    Json cols = Json::array();
    for (Eigen::Index c = 0; c < s.dim(); ++c) cols.push_back(doubles(Eigen::VectorXd(s.basis().col(c))));
    els.push_back(std::move(cols));
  }
  j["elements"] = std::move(els);
  return j;
}

gr::EpsNet read_net(const Json& d) {
  expect_document(d, "eps_net");
  return guarded("eps net", [&] {
    gr::EpsNet net;
    net.d = d.at("d").get<Eigen::Index>();
    net.k = d.at("k").get<Eigen::Index>();
    net.eps = d.at("eps").get<double>();
    net.seed = d.at("seed").get<std::uint64_t>();
    net.audit.samples = d.at("audit").at("samples").get<std::size_t>();
    net.audit.max_observed_gap = d.at("audit").at("max_observed_gap").get<double>();
    for (const auto& el : d.at("elements")) {
      const auto cols = rows_from_json(el);
      if (static_cast<Eigen::Index>(cols.size()) != net.k) throw InputError("net element with wrong dimension");
      Eigen::MatrixXd b(net.d, net.k);
      for (Eigen::Index c = 0; c < net.k; ++c) {
        if (cols[static_cast<std::size_t>(c)].size() != net.d) throw InputError("net element with wrong ambient dimension");
        b.col(c) = cols[static_cast<std::size_t>(c)];
      }
      net.elements.emplace_back(std::move(b));
    }
    return net;
  });
}

Json cone_document(const nonconvex::Cone& cone) {
  Json j = doc("cone");
  j["d"] = cone.dim();
  Json a = Json::array();
  if (!cone.generators().empty()) {
    for (const auto& g : cone.generators()) a.push_back(doubles(g));
    j["generators"] = std::move(a);
  } else {
    for (const auto& h : cone.halfspaces()) a.push_back(doubles(h));
    j["halfspaces"] = std::move(a);
  }
  return j;
}

nonconvex::Cone read_cone(const Json& d) {
  expect_document(d, "cone");
  return guarded("cone", [&] {
    if (d.contains("generators")) return nonconvex::Cone::from_generators(rows_from_json(d.at("generators")));
    if (d.contains("halfspaces")) return nonconvex::Cone::from_halfspaces(rows_from_json(d.at("halfspaces")));
    throw InputError("cone needs \"generators\" or \"halfspaces\"");
  });
}

Json refutation_document(const nonconvex::Refutation& r) {
  Json j = doc("refutation");
  if (const auto* early = std::get_if<nonconvex::EarlyRefutation>(&r)) {
    j["type"] = "early";
    j["condition"] = early->condition;
    j["net_index"] = early->net_index;
    j["witness_z"] = early->witness_z ? doubles(*early->witness_z) : Json(nullptr);
    j["margin"] = early->margin;
    j["notes"] = early->notes;
    return j;
  }
  const auto& c = std::get<nonconvex::RefutationCertificate>(r);
  const auto& t = c.trace;
  auto list = [](const std::vector<Eigen::VectorXd>& vs) {
    Json a = Json::array();
    for (const auto& v : vs) a.push_back(doubles(v));
    return a;
  };
  j["type"] = "certificate";
  j["net_index"] = c.net_index;
  j["witness_z"] = doubles(c.witness_z);
  j["margin_interior"] = c.margin_interior;
  j["membership_residual"] = c.membership_residual;
  Json tr;
  tr["a_vectors"] = list(t.a_vectors);
  tr["a_net_indices"] = indices(t.a_net_indices);
  tr["b_vectors"] = list(t.b_vectors);
  tr["c_vectors"] = list(t.c_vectors);
  tr["c_star"] = list(t.c_star);
  tr["b"] = doubles(t.b);
  tr["b_star"] = doubles(t.b_star);
  tr["x"] = doubles(t.x);
  tr["y_j"] = doubles(t.y_j);
  tr["y"] = t.y;
  tr["det_m"] = t.det_m;
  tr["det_mtm"] = t.det_mtm;
  tr["det_mstar_tmstar"] = t.det_mstar_tmstar;
  tr["eta"] = t.eta;
  tr["w_angle"] = t.w_angle;
  j["trace"] = std::move(tr);
  j["notes"] = c.notes;
  return j;
}

Json extraction_document(const eskit::ExtractionResult& r) {
  Json j = doc("extraction");
  j["chosen_indices"] = indices(r.chosen_indices);
  j["transversal"] = r.transversal ? to_json(*r.transversal) : Json(nullptr);
  j["points"] = points_json(r.points);
  j["certificate"] = certificate_document(r.certificate);
  return j;
}

Json section_document(const nonconvex::SectionResult& s) {
  Json j = flats_document(s.flats);
  j["net_index"] = indices(s.net_index);
  j["parallel"] = indices(s.parallel);
  return j;
}

Json verdict_document(bool convex, bool certified, const std::string& note) {
  Json j = doc("verdict");
  j["convex"] = convex;
  j["certified"] = certified;
  j["note"] = note;
  return j;
}

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const Json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

}  // namespace esflats::io
