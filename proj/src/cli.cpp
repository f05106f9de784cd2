#include "esflats/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "esflats/error.hpp"
#include "esflats/eskit.hpp"
#include "esflats/instances.hpp"
#include "esflats/io.hpp"

namespace esflats::cli {

namespace {

using io::Json;

constexpr int kExperimentRetries = 8;

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw InputError("cannot write " + path);
  f << text;
}

std::vector<geom::Flat> as_point_flats(const std::vector<RVec>& pts) {
  std::vector<geom::Flat> flats;
  for (const auto& p : pts) flats.push_back(geom::Flat::point(p));
  return flats;
}

// Largest m in [3, N] for which the pipeline finds m hyperplanes in convex position,
// together with the verification result of the run at size n.
ExperimentRow hyperplane_trial(const std::vector<geom::Hyperplane>& hps, std::size_t n, std::uint64_t seed) {
  ExperimentRow row{seed, hps.size(), 0, false};
  const eskit::ExtractOptions opts{.seed = seed, .retries = kExperimentRetries};
  for (std::size_t m = 3; m <= hps.size(); ++m) {
    try {
      const auto r = eskit::hyperplane_pipeline(hps, m, opts);
      row.found_size = m;
      if (m == n) row.verified = convexpos::verify_certificate(r.certificate).ok;
    } catch (const SearchExhausted&) {
      break;
    }
  }
  return row;
}

ExperimentRow flats_trial(const std::vector<geom::Flat>& flats, std::size_t n, std::uint64_t seed) {
  ExperimentRow row{seed, flats.size(), 0, false};
  const eskit::ExtractOptions opts{.seed = seed};
  row.found_size = eskit::find_convex_anchors(flats, opts).convex.size();
  if (row.found_size >= n) {
    const auto r = eskit::extract_convex_flats(flats, n, opts);
    row.verified = convexpos::verify_certificate(r.certificate).ok;
  }
  return row;
}

}  // namespace

void validate(const ExperimentSpec& s) {
  if (s.n < 3) throw InputError("--n must be at least 3");
  if (s.N < 3) throw InputError("--N must be at least 3");
  if (s.trials == 0) throw InputError("--trials must be positive");
  if (s.mode == "points") {
    if (s.d < 2) throw InputError("points need d >= 2");
    if (s.N < s.d + 1) throw InputError("points need N >= d + 1");
  } else if (s.mode == "lines") {
    if (s.d != 2) throw InputError("lines live in the plane: d must be 2");
  } else if (s.mode == "hyperplanes") {
    if (s.d < 2 || s.d > 6) throw InputError("hyperplanes need 2 <= d <= 6");
    if (s.N < s.d) throw InputError("hyperplanes need N >= d");
  } else if (s.mode == "flats") {
    if (s.k == 0 || s.k + 1 >= s.d) throw InputError("flats need 0 < k < d - 1");
    if (s.N < s.d - s.k + 1) throw InputError("flats need N >= d - k + 1");
  } else {
    throw InputError("unknown mode \"" + s.mode + "\" (points, lines, hyperplanes, flats)");
  }
}

std::vector<ExperimentRow> run_experiment(const ExperimentSpec& spec) {
  validate(spec);
  std::vector<ExperimentRow> rows;
  for (std::size_t t = 0; t < spec.trials; ++t) {
    const std::uint64_t seed = spec.seed + t;
    if (spec.mode == "points") {
      rows.push_back(flats_trial(as_point_flats(instances::random_points(spec.d, spec.N, seed)), spec.n, seed));
    } else if (spec.mode == "flats") {
      rows.push_back(flats_trial(instances::random_flats(spec.d, spec.k, spec.N, seed), spec.n, seed));
    } else {
      rows.push_back(hyperplane_trial(instances::random_hyperplanes(spec.d, spec.N, seed), spec.n, seed));
    }
  }
  return rows;
}

std::string to_csv(const std::vector<ExperimentRow>& rows) {
  std::ostringstream os;
  os << "seed,N,found_size,verified\n";
  for (const auto& r : rows) os << r.seed << ',' << r.N << ',' << r.found_size << ',' << (r.verified ? 1 : 0) << '\n';
  return os.str();
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Convex position of flats: deciders, certificates, extraction and refutation", "esflats"};
  app.require_subcommand(1);
  std::function<int()> run;

  std::string file, out_path;
  std::uint64_t seed = 1;
  int retries = 32;

  auto add_out = [&](CLI::App* sub) { sub->add_option("-o,--out", out_path, "Write the JSON result here instead of stdout"); };
  auto add_seed = [&](CLI::App* sub) { sub->add_option("--seed", seed, "Random seed")->capture_default_str(); };

  // Convex answers print a certificate; negative ones print a verdict document.
  auto report = [&](bool convex, bool certified, const std::string& note,
                    const convexpos::ConvexityCertificate* cert) {
    if (convex && cert) {
      emit(io::dump(io::certificate_document(*cert)), out_path, out);
      err << "convex: certificate written\n";
      return kYes;
    }
    emit(io::dump(io::verdict_document(convex, certified, note)), out_path, out);
    err << (convex ? "convex" : "not convex") << (note.empty() ? "" : ": " + note) << '\n';
    return convex ? kYes : kNo;
  };

  std::size_t d = 2;
  std::string magnitude = "1/1000";
  auto* gen_octa = app.add_subcommand("gen-octa", "Perturbed octahedron hyperplane family (2 <= d <= 4)");
  gen_octa->add_option("--d", d, "Dimension")->required();
  gen_octa->add_option("--magnitude", magnitude, "Perturbation size as p/q")->capture_default_str();
  add_seed(gen_octa);
  add_out(gen_octa);
  gen_octa->callback([&] {
    run = [&] {
      const auto fam = nonconvex::octa_family(d, seed, parse_rat(magnitude));
      emit(io::dump(io::octa_document(fam)), out_path, out);
      return kYes;
    };
  });

  auto* verify_octa = app.add_subcommand("verify-octa", "Check with exact LPs that an octahedron family is not convex");
  verify_octa->add_option("file", file, "octa_family JSON")->required();
  verify_octa->callback([&] {
    run = [&] {
      const auto verdict = nonconvex::verify_octa_nonconvex(io::read_octa(io::read_file(file)));
      for (const auto& line : verdict.log) out << line << '\n';
      out << (verdict.certified ? "certified: not in convex position\n" : "not certified\n");
      return verdict.certified ? kYes : kNo;
    };
  });

  auto* check_points = app.add_subcommand("check-points", "Decide convex position of points (exact)");
  check_points->add_option("file", file, "points JSON")->required();
  add_out(check_points);
  check_points->callback([&] {
    run = [&] {
      const auto pts = io::read_points(io::read_file(file));
      if (pts.size() < 3) throw InputError("need at least three points");
      if (!convexpos::points_convex_position(pts)) return report(false, true, "some point lies in the hull of the others", nullptr);
      const auto cert = eskit::certify_from_anchors(as_point_flats(pts), pts);
      return report(true, true, "", &cert);
    };
  });

  auto* check_lines = app.add_subcommand("check-lines", "Decide convex position of lines in the plane (exact)");
  check_lines->add_option("file", file, "hyperplanes JSON with d = 2")->required();
  add_out(check_lines);
  check_lines->callback([&] {
    run = [&] {
      const auto lines = io::read_hyperplanes(io::read_file(file));
      if (lines.empty() || lines.front().ambient_dim() != 2) throw InputError("check-lines needs lines in R^2");
      const auto gp = convexpos::general_position_hyperplanes(lines);
      if (!gp.ok) throw GeneralPositionError(gp.reason);
      const auto lv = convexpos::lines_convex_position_2d(lines);
      if (!lv.convex) return report(false, true, "no arrangement cell has every line as an edge", nullptr);
      const auto cert = convexpos::lift_cell_certificate(lines, *lv.witness);
      return report(true, true, "", &cert);
    };
  });

  auto* check_hps = app.add_subcommand("check-hyperplanes", "Convex position of hyperplanes via random 2-plane sections");
  check_hps->add_option("file", file, "hyperplanes JSON")->required();
  check_hps->add_option("--retries", retries, "Number of sections to try")->capture_default_str();
  add_seed(check_hps);
  add_out(check_hps);
  check_hps->callback([&] {
    run = [&] {
      const auto hps = io::read_hyperplanes(io::read_file(file));
      if (hps.empty()) throw InputError("no hyperplanes");
      const auto v = convexpos::hyperplanes_convex_position(hps, {seed, retries});
      return report(v.convex, v.certified, v.note, v.certificate ? &*v.certificate : nullptr);
    };
  });

  auto* verify_cert = app.add_subcommand("verify-cert", "Re-check a convexity certificate exactly");
  verify_cert->add_option("file", file, "certificate or extraction JSON")->required();
  verify_cert->callback([&] {
    run = [&] {
      auto doc = io::read_file(file);
      if (doc.is_object() && doc.contains("kind") && doc["kind"] == "extraction" && doc.contains("certificate")) {
        io::expect_document(doc, "extraction");
        doc = doc["certificate"];
      }
      const auto v = convexpos::verify_certificate(io::read_certificate(doc));
      if (v.ok) {
        out << "certificate verified\n";
        return kYes;
      }
      out << "certificate rejected, clause " << v.clause << ": " << v.message << '\n';
      return kNo;
    };
  });

  std::size_t n = 4;
  auto* extract = app.add_subcommand("extract", "Find n flats in convex position and certify them");
  extract->add_option("file", file, "flats or hyperplanes JSON")->required();
  extract->add_option("--n", n, "Size of the convex subfamily")->capture_default_str();
  extract->add_option("--retries", retries, "Random retries")->capture_default_str();
  add_seed(extract);
  add_out(extract);
  extract->callback([&] {
    run = [&] {
      const auto doc = io::read_file(file);
      const eskit::ExtractOptions opts{.seed = seed, .retries = retries};
      eskit::ExtractionResult r;
      const bool hyperplanes = doc.contains("kind") && (doc["kind"] == "hyperplanes" || doc["kind"] == "octa_family");
      if (hyperplanes) {
        r = eskit::hyperplane_pipeline(io::read_hyperplanes(doc), n, opts);
      } else {
        const auto flats = io::read_flats(doc);
        if (!flats.empty() && flats.front().dim() + 1 == flats.front().ambient_dim()) {
          std::vector<geom::Hyperplane> hps;
          for (const auto& f : flats) hps.push_back(convexpos::flat_as_hyperplane(f));
          r = eskit::hyperplane_pipeline(hps, n, opts);
        } else {
          r = eskit::extract_convex_flats(flats, n, opts);
        }
      }
      emit(io::dump(io::extraction_document(r)), out_path, out);
      return kYes;
    };
  });

  std::size_t k = 1;
  double eps = 0.1;
  gr::NetOptions net_opts;
  auto* net = app.add_subcommand("net", "Epsilon-net of Gr(k, d) with a sampled coverage audit");
  net->add_option("--d", d, "Ambient dimension")->required();
  net->add_option("--k", k, "Subspace dimension")->required();
  net->add_option("--eps", eps, "Covering radius (largest principal angle)")->required();
  net->add_option("--audit-samples", net_opts.audit_samples, "Audit samples")->capture_default_str();
  net->add_option("--stall-limit", net_opts.stall_limit, "Rejected candidates before stopping")->capture_default_str();
  add_seed(net);
  add_out(net);
  net->callback([&] {
    run = [&] {
      const auto result = gr::build_eps_net(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(k), eps, seed, net_opts);
      emit(io::dump(io::net_document(result)), out_path, out);
      return kYes;
    };
  });

  std::string cone_file, net_file;
  nonconvex::RefuteOptions refute_opts;
  auto* refute = app.add_subcommand("refute-cone", "Show that some net element violates the face conditions of a cone");
  refute->add_option("--cone", cone_file, "cone JSON")->required();
  refute->add_option("--net", net_file, "eps_net JSON")->required();
  refute->add_option("--tau", refute_opts.tau, "Margin tolerance")->capture_default_str();
  refute->add_flag("--full-scan", refute_opts.full_scan, "Scan the whole net first");
  add_out(refute);
  refute->callback([&] {
    run = [&] {
      const auto cone = io::read_cone(io::read_file(cone_file));
      const auto the_net = io::read_net(io::read_file(net_file));
      const auto r = nonconvex::refute_cone(cone, the_net, refute_opts);
      emit(io::dump(io::refutation_document(r)), out_path, out);
      return kYes;
    };
  });

  auto* section = app.add_subcommand("section", "Turn a net over Gr(k+1, d+1) into affine k-flats in R^d");
  section->add_option("--net", net_file, "eps_net JSON")->required();
  add_out(section);
  section->callback([&] {
    run = [&] {
      const auto s = nonconvex::section_to_affine(io::read_net(io::read_file(net_file)));
      emit(io::dump(io::section_document(s)), out_path, out);
      return kYes;
    };
  });

  ExperimentSpec spec;
  auto* experiment = app.add_subcommand("experiment", "Seeded random trials, CSV on stdout");
  experiment->add_option("--mode", spec.mode, "points, lines, hyperplanes or flats")->required();
  experiment->add_option("--d", spec.d, "Ambient dimension")->capture_default_str();
  experiment->add_option("--k", spec.k, "Flat dimension (flats mode)")->capture_default_str();
  experiment->add_option("--n", spec.n, "Target subset size")->capture_default_str();
  experiment->add_option("--N", spec.N, "Instance size")->capture_default_str();
  experiment->add_option("--trials", spec.trials, "Number of trials")->capture_default_str();
  experiment->add_option("--seed", spec.seed, "Seed of the first trial")->capture_default_str();
  add_out(experiment);
  experiment->callback([&] {
    run = [&] {
      const auto rows = run_experiment(spec);
      emit(to_csv(rows), out_path, out);
      const bool all = std::all_of(rows.begin(), rows.end(), [&](const ExperimentRow& r) { return r.found_size >= spec.n; });
      return all ? kYes : kNo;
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return kError;
  }

  try {
    return run();
  } catch (const SearchExhausted& e) {
    err << "Error: " << e.what() << '\n';
    return kNo;
  } catch (const ConstructionError& e) {
    err << "Error: " << e.what() << '\n';
    return kNo;
  } catch (const std::exception& e) {
    err << "Error: " << e.what() << '\n';
    return kError;
  }
}

}  // namespace esflats::cli
