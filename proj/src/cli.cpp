#include "tabletloom/cli.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "tabletloom/band_io.hpp"
#include "tabletloom/loom.hpp"
#include "tabletloom/plan.hpp"
#include "tabletloom/reader.hpp"
#include "tabletloom/render.hpp"
#include "tabletloom/service.hpp"

namespace tabletloom {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Holds the most recently read source so diagnostics can quote it.
struct Session {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
  std::string source;

  std::string read(const std::string& path) {
    if (path == "-") {
      source.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    } else {
      source = read_input(path);
    }
    return source;
  }

  FlatPlan plan(const std::string& path) { return compile(read(path)); }

  void write(const std::string& path, const std::string& bytes) {
    if (path.empty() || path == "-") {
      out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
      out.flush();
      return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("E_IO", "cannot write '" + path + "'");
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw Error("E_IO", "failed writing '" + path + "'");
  }
};

Face parse_face(const std::string& s) {
  if (s == "front") return Face::Front;
  if (s == "back") return Face::Back;
  return Face::Both;
}

bool looks_like_json(std::string_view text) {
  std::size_t i = text.find_first_not_of(" \t\r\n");
  return i != std::string_view::npos && text[i] == '{';
}

std::string twist_report(const TwistProfile& p) {
  std::ostringstream os;
  for (std::size_t t = 0; t < p.series.size(); ++t) {
    std::int64_t final_twist = p.series[t].empty() ? 0 : p.series[t].back();
    os << "tablet " << (t + 1) << ": final " << final_twist << " max " << p.max_per_tablet[t];
    if (p.first_warning_per_tablet[t]) os << " warn-at " << *p.first_warning_per_tablet[t];
    os << "\n";
  }
  os << "max |twist| " << p.max_abs << "\n";
  if (p.first_warning) {
    os << "warning: twist exceeds " << p.threshold << " at pick " << *p.first_warning << "\n";
  } else {
    os << "no tablet exceeds " << p.threshold << "\n";
  }
  return os.str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tablet weaving simulator", "tabletloom"};
  app.require_subcommand(1);

  std::string plan_path;
  std::string input_path;
  std::string grid_path;
  std::string out_path;
  std::string format = "text";
  std::string face = "front";
  int cell_size = 12;
  bool ansi = false;
  bool no_slant = false;
  std::int64_t threshold = kDefaultTwistThreshold;
  bool any_start = false;
  std::uint64_t cap = InferOptions{}.cap;
  std::size_t tablets = 0;
  std::string bits_hex;
  std::string bits_file;
  std::optional<std::size_t> bit_length;
  int port = 8765;
  std::string host = "127.0.0.1";

  auto* simulate_cmd = app.add_subcommand("simulate", "Simulate a band plan and print drawdown JSON");
  simulate_cmd->add_option("plan", plan_path, "Band plan file, or - for stdin")->required();
  simulate_cmd->add_option("--out", out_path, "Output file (default stdout)");

  auto* render_cmd = app.add_subcommand("render", "Render a band plan or drawdown JSON");
  render_cmd->add_option("input", input_path, "Band plan or drawdown JSON, or -")->required();
  render_cmd->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"text", "svg", "ppm", "grid"}));
  render_cmd->add_option("--face", face, "Which face to show")->check(CLI::IsMember({"front", "back", "both"}));
  render_cmd->add_option("--cell-size", cell_size, "Cell size in pixels (svg, ppm)")->check(CLI::PositiveNumber);
  render_cmd->add_flag("--ansi", ansi, "Colour text output with 24-bit escapes");
  render_cmd->add_flag("--no-slant", no_slant, "Draw plain cells (svg, ppm)");
  render_cmd->add_option("--out", out_path, "Output file (default stdout)");

  auto* validate_cmd = app.add_subcommand("validate", "Check a band plan");
  validate_cmd->add_option("plan", plan_path, "Band plan file, or -")->required();

  auto* twist_cmd = app.add_subcommand("twist", "Report accumulated twist per tablet");
  twist_cmd->add_option("plan", plan_path, "Band plan file, or -")->required();
  twist_cmd->add_option("--threshold", threshold, "Warning threshold in quarter turns");

  auto* read_cmd = app.add_subcommand("read", "Reconstruct turns from an observed front-face grid");
  read_cmd->add_option("grid", grid_path, "Grid file, or -")->required();
  read_cmd->add_option("threading", plan_path, "Band plan supplying the threading")->required();
  read_cmd->add_flag("--any-start", any_start, "Search every starting rotation");
  read_cmd->add_option("--cap", cap, "Stop counting solutions at this value")->check(CLI::PositiveNumber);

  auto* encode_cmd = app.add_subcommand("encode", "Encode bits as a band plan");
  encode_cmd->add_option("--tablets", tablets, "Tablet count")->required()->check(CLI::PositiveNumber);
  auto* hex_opt = encode_cmd->add_option("--bits-hex", bits_hex, "Bits as hex digits, most significant first");
  auto* in_opt = encode_cmd->add_option("--in", bits_file, "File whose bytes are encoded, or -");
  hex_opt->excludes(in_opt);
  in_opt->excludes(hex_opt);

  auto* decode_cmd = app.add_subcommand("decode", "Decode bits from an observed front-face grid");
  decode_cmd->add_option("grid", grid_path, "Grid file, or -")->required();
  decode_cmd->add_option("threading", plan_path, "Band plan supplying the codec threading")->required();
  decode_cmd->add_option("--bits", bit_length, "Number of bits (default: the plan's '# bits:' header)");

  auto* serve_cmd = app.add_subcommand("serve", "Serve the simulator over local HTTP");
  serve_cmd->add_option("--port", port, "Port")->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--host", host, "Bind address");

  std::vector<std::string> argv_storage{"tabletloom"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kExitUsage;
  }

  Session s{in, out, err, {}};
  try {
    if (simulate_cmd->parsed()) {
      s.write(out_path, export_drawdown(simulate(s.plan(plan_path))));
    } else if (render_cmd->parsed()) {
      std::string text = s.read(input_path);
      Drawdown d = looks_like_json(text) ? import_drawdown(text) : simulate(compile(text));
      RenderOptions opts;
      opts.face = parse_face(face);
      opts.cell_size = cell_size;
      opts.ansi = ansi;
      opts.show_slant = !no_slant;
      if (format == "text") {
        s.write(out_path, render_text(d, opts));
      } else if (format == "svg") {
        s.write(out_path, render_svg(d, opts));
      } else if (format == "ppm") {
        s.write(out_path, render_raster(d, opts));
      } else {
        s.write(out_path, format_grid(front_grid(d)));
      }
    } else if (validate_cmd->parsed()) {
      (void)simulate(s.plan(plan_path));
      out << "OK\n";
    } else if (twist_cmd->parsed()) {
      out << twist_report(twist_profile(simulate(s.plan(plan_path)), threshold));
    } else if (read_cmd->parsed()) {
      FlatPlan threading = s.plan(plan_path);
      ColorGrid grid = import_grid(s.read(grid_path));
      InferenceResult r = infer_turns(grid, threading.threading, threading.palette, {!any_start, cap});
      std::vector<std::string> header{"solutions: " + std::to_string(r.solution_count) + (r.capped ? "+" : ""),
                                      std::string("capped: ") + (r.capped ? "yes" : "no")};
      if (any_start) {
        std::string starts = "start rotations:";
        for (int st : r.start_rotation) starts += " " + std::to_string(st);
        header.push_back(starts);
      }
      out << pretty_print(r.plan, header);
    } else if (encode_cmd->parsed()) {
      Bits bits;
      if (!bits_file.empty()) {
        bits = bits_from_bytes(s.read(bits_file));
      } else if (hex_opt->count() > 0) {
        bits = bits_from_hex(bits_hex);
      } else {
        throw UsageError("encode needs --bits-hex or --in");
      }
      out << encode_bits(bits, tablets).source();
    } else if (decode_cmd->parsed()) {
      std::string threading_source = s.read(plan_path);
      FlatPlan threading = compile(threading_source);
      std::optional<std::size_t> n = bit_length ? bit_length : bit_length_header(threading_source);
      if (!n) throw UsageError("decode needs --bits when the threading plan has no '# bits:' header");
      ColorGrid grid = import_grid(s.read(grid_path));
      out << bits_to_string(decode_bits(grid, threading.threading, *n)) << "\n";
    } else if (serve_cmd->parsed()) {
      std::filesystem::path catalog = default_catalog_dir();
      Service service(catalog);
      int bound = service.bind(host, port);
      err << "serving on http://" << host << ":" << bound << " (catalog " << catalog.string() << ")\n";
      service.listen();
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  } catch (const Error& e) {
    if (!e.diagnostics().empty()) {
      err << format_errors(e.diagnostics(), s.source);
    } else {
      err << "error: " << e.code() << ": " << e.what() << "\n";
    }
    return kExitDomainError;
  }
  return kExitOk;
}

}  // namespace tabletloom
