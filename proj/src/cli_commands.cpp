#include "capbody/cli_commands.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "capbody/bounds.hpp"
#include "capbody/constructions.hpp"
#include "capbody/covering.hpp"
#include "capbody/json_io.hpp"
#include "capbody/piercing.hpp"
#include "capbody/spiky.hpp"

namespace capbody {

namespace {

void emit_json(const nlohmann::json& j, const std::string& out_path,
               std::ostream& out) {
  if (out_path.empty())
    out << j.dump(2) << '\n';
  else
    save_json_file(out_path, j);
}

void emit_text(const std::string& text, const std::string& out_path,
               std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(out_path);
  if (!f)
    throw std::invalid_argument("cannot open file for write: " + out_path);
  f << text;
}

GenKind gen_kind_from_name(const std::string& name) {
  if (name == "two_illuminable") return GenKind::two_illuminable;
  if (name == "symmetric" || name == "symmetric_cap_body")
    return GenKind::symmetric_cap_body;
  if (name == "unconditional" || name == "unconditional_cap_body")
    return GenKind::unconditional_cap_body;
  if (name == "planar_lifted") return GenKind::planar_lifted;
  throw std::invalid_argument(
      "unknown kind \"" + name +
      "\" (expected two_illuminable|symmetric|unconditional|planar_lifted)");
}

struct GlobalOpts {
  std::uint64_t seed = 20250816;
  Tolerance tol;
  std::string out_path;
  std::string format = "json";
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"spiky balls, cap bodies and illumination direction sets"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand name

  GlobalOpts g;
  app.add_option("--seed", g.seed, "base seed for all randomized steps");
  app.add_option("--tol-predicate", g.tol.predicate,
                 "tolerance separating boolean geometric predicates");
  app.add_option("--tol-geometry", g.tol.geometry,
                 "tolerance required of constructed margins");
  app.add_option("--out", g.out_path, "write primary output to this file");
  app.add_option("--format", g.format, "output format: json or csv (bounds)");

  std::string kind_name, in_path, cover_path, dirs_path, report_path;
  int dim = 0, n = 0, sphere_dim = 0, candidates = 600;
  double alpha = 0.0;
  bool known_only = false;
  int dmin = 5, dmax = 64, window = 200;
  std::string scan;

  CLI::App* gen = app.add_subcommand("gen", "generate a random instance");
  gen->add_option("--kind", kind_name,
                  "two_illuminable|symmetric|unconditional|planar_lifted")
      ->required();
  gen->add_option("--dim", dim, "ambient dimension")->required();
  gen->add_option("--n", n, "vertex/pair/orbit/disk count")->required();

  CLI::App* illuminate_cmd =
      app.add_subcommand("illuminate", "construct an illuminating set");
  illuminate_cmd->add_option("--in", in_path, "instance JSON file")
      ->required();
  illuminate_cmd->add_option("--cover", cover_path,
                             "verified covering JSON to reuse");
  illuminate_cmd->add_option("--report", report_path,
                             "write the full construction report here");

  CLI::App* verify_cmd =
      app.add_subcommand("verify", "verify directions or a covering");
  verify_cmd->add_option("--in", in_path, "instance JSON file");
  verify_cmd->add_option("--directions", dirs_path, "directions JSON file");
  verify_cmd->add_option("--cover", cover_path, "covering JSON file");

  CLI::App* cover_cmd =
      app.add_subcommand("cover", "build a covering of a sphere by caps");
  cover_cmd->add_option("--sphere-dim", sphere_dim, "dimension m of S^m")
      ->required();
  cover_cmd->add_option("--alpha", alpha, "cap angular radius")->required();
  cover_cmd->add_option("--candidates", candidates,
                        "candidate pool size for the greedy stage");
  cover_cmd->add_flag("--known-only", known_only,
                      "only use the hand-verified table");

  CLI::App* pierce_cmd = app.add_subcommand(
      "pierce", "exact minimum piercing of an instance's caps (dim 2 or 3)");
  pierce_cmd->add_option("--in", in_path, "instance JSON file")->required();

  CLI::App* bounds_cmd =
      app.add_subcommand("bounds", "covering-number bounds and ratio curves");
  bounds_cmd->add_option("--dmin", dmin, "first dimension (>= 5)");
  bounds_cmd->add_option("--dmax", dmax, "last dimension");
  bounds_cmd->add_option("--scan", scan,
                         "threshold scan instead of curves: spiky|capbody");
  bounds_cmd->add_option("--window", window, "scan window length");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream buf;
    const int code = app.exit(e, buf, buf);
    (code == 0 ? out : err) << buf.str();
    return code == 0 ? 0 : 2;
  }

  try {
    g.tol.validate();
    if (g.format != "json" && g.format != "csv")
      throw std::invalid_argument("--format must be json or csv");

    if (*gen) {
      const SpikyBall ball =
          gen_instance(gen_kind_from_name(kind_name), dim, n, g.seed, g.tol);
      emit_json(instance_to_json(ball), g.out_path, out);
      if (!g.out_path.empty())
        out << "instance: dim=" << ball.dim << " vertices=" << ball.size()
            << " -> " << g.out_path << '\n';
      return 0;
    }

    if (*illuminate_cmd) {
      const SpikyBall ball = instance_from_json(load_json_file(in_path), g.tol);
      CoveringSpec cover;
      const CoveringSpec* cover_ptr = nullptr;
      if (!cover_path.empty()) {
        cover = cover_from_json(load_json_file(cover_path));
        cover_ptr = &cover;
      }
      const ConstructionResult result =
          illuminate(ball, g.seed, g.tol, cover_ptr);
      emit_json(directions_to_json(result.directions), g.out_path, out);
      if (!report_path.empty())
        save_json_file(report_path, construction_to_json(result));
      err << "method=" << result.method
          << " directions=" << result.directions.size()
          << " stated_bound=" << result.stated_bound
          << " verified=" << (result.report.verdict ? "yes" : "no")
          << " min_margin=" << result.report.min_margin << '\n';
      return result.report.verdict ? 0 : 1;
    }

    if (*verify_cmd) {
      if (!cover_path.empty()) {
        const CoveringSpec spec = cover_from_json(load_json_file(cover_path));
        const CoverReport report = verify_cover(spec, g.tol);
        emit_json(cover_report_to_json(report), g.out_path, out);
        return report.status != VerifyStatus::unverified ? 0 : 1;
      }
      if (in_path.empty() || dirs_path.empty())
        throw std::invalid_argument(
            "verify needs either --cover or both --in and --directions");
      const SpikyBall ball = instance_from_json(load_json_file(in_path), g.tol);
      const DirectionSet dirs =
          directions_from_json(load_json_file(dirs_path));
      const IlluminationReport report = verify_illumination(ball, dirs, g.tol);
      emit_json(report_to_json(report), g.out_path, out);
      return report.verdict ? 0 : 1;
    }

    if (*cover_cmd) {
      std::optional<CoveringSpec> spec = known_cover(sphere_dim, alpha, g.tol);
      if (!spec && known_only) {
        err << "no table entry for S^" << sphere_dim << " at alpha=" << alpha
            << '\n';
        return 1;
      }
      if (!spec)
        spec = greedy_cover(sphere_dim, alpha, g.seed, candidates, g.tol);
      const CoverReport report = verify_cover(*spec, g.tol);
      emit_json(cover_to_json(*spec), g.out_path, out);
      err << "cover: size=" << spec->size() << " status=" << report.note
          << " min_margin=" << report.min_margin << '\n';
      return spec->verified != VerifyStatus::unverified ? 0 : 1;
    }

    if (*pierce_cmd) {
      const SpikyBall ball = instance_from_json(load_json_file(in_path), g.tol);
      const auto caps = piercing_caps(ball, g.tol);
      PiercingSolution sol;
      if (ball.dim == 2)
        sol = pierce_arcs_exact(caps, g.tol);
      else if (ball.dim == 3)
        sol = pierce_caps_exact(caps, g.tol);
      else
        throw std::invalid_argument(
            "exact piercing is implemented for dimensions 2 and 3");
      emit_json(piercing_to_json(sol), g.out_path, out);
      return 0;
    }

    if (*bounds_cmd) {
      if (!scan.empty()) {
        ThresholdScan s;
        if (scan == "spiky")
          s = scan_spiky_threshold(window);
        else if (scan == "capbody")
          s = scan_capbody_threshold(window);
        else
          throw std::invalid_argument("--scan must be spiky or capbody");
        nlohmann::json j;
        j["curve"] = scan;
        j["d"] = s.d;
        j["monotone_decreasing"] = s.monotone_decreasing;
        j["max_ratio"] = s.max_ratio;
        emit_json(j, g.out_path, out);
        return 0;
      }
      const auto rows = ratio_curves(dmin, dmax);
      if (g.format == "csv") {
        std::ostringstream buf;
        write_bounds_csv(buf, rows);
        emit_text(buf.str(), g.out_path, out);
      } else {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : rows) {
          nlohmann::json row;
          row["d"] = r.d;
          row["omega_pi6"] = r.omega_pi6;
          row["omega_pi4"] = r.omega_pi4;
          row["dumer_pi6"] = r.dumer_pi6;
          row["dumer_pi4"] = r.dumer_pi4;
          row["spiky_bound"] = r.spiky;
          row["capbody_bound"] = r.capbody;
          row["f_ratio"] = r.f_ratio;
          row["g_ratio"] = r.g_ratio;
          arr.push_back(std::move(row));
        }
        emit_json(arr, g.out_path, out);
      }
      return 0;
    }

    throw std::invalid_argument("no subcommand selected");
  } catch (const internal_error& e) {
    err << "internal error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "failed: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace capbody
