#include "alpern/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "alpern/construction.hpp"
#include "alpern/error.hpp"
#include "alpern/ingestion.hpp"
#include "alpern/render.hpp"
#include "alpern/report.hpp"
#include "alpern/richness.hpp"
#include "alpern/verification.hpp"

namespace alpern::cli {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
  file << text;
}

std::vector<std::string_view> split_commas(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(',', start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool is_construction_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotRich:
    case ErrorCode::QuotaNegative:
    case ErrorCode::QuotaUnmet:
    case ErrorCode::TooShort:
    case ErrorCode::AQuotaUnmet:
    case ErrorCode::MisalignedHandoff:
    case ErrorCode::NegativeMass:
      return true;
    default:
      return false;
  }
}

struct Options {
  // build
  std::string out;
  std::string labels;
  int cells = 0;
  std::int64_t p = 0;
  std::int64_t q = 0;
  std::string breaks;
  std::string terms;
  int N = 0;
  // construct / verify / render
  std::string system_file;
  std::string selection_file;
  bool allow_small_M = false;
  bool oracle = false;
  std::int64_t grid_limit = kDefaultGridLimit;
  std::string format = "ascii";
  std::string levels;
  std::string column;
  int block = 0;
};

int cmd_build_cyclic(const Options& o, std::ostream& out) {
  auto labels = parse_labels(o.labels, o.cells > 0 ? o.cells : 9);
  int t = o.cells;
  if (t == 0) t = labels.empty() ? 1 : *std::max_element(labels.begin(), labels.end());
  write_output(o.out, serialize_system(build_cyclic(std::move(labels), default_partition(t))), out);
  return kOk;
}

int cmd_build_rotation(const Options& o, std::ostream& out) {
  RotationSpec spec{o.p, o.q, {}};
  for (const auto b : split_commas(o.breaks)) spec.breakpoints.push_back(Ratio::parse(b));
  write_output(o.out, serialize_system(build_rotation(spec)), out);
  return kOk;
}

int cmd_build_rotation_cf(const Options& o, std::ostream& out, std::ostream& err) {
  std::vector<std::int64_t> terms;
  if (!o.terms.empty()) {
    for (const auto s : split_commas(o.terms)) {
      const Ratio r = Ratio::parse(s);
      if (!r.is_integer()) throw Error(ErrorCode::Syntax, "continued fraction terms must be integers");
      terms.push_back(to_int64(r.numerator()));
    }
  }
  const auto enriched = enrich_rotation(terms, equal_breakpoints(o.cells), o.N, o.cells);
  err << "convergent " << enriched.convergent.p << "/" << enriched.convergent.q << ", M = " << enriched.M << '\n';
  write_output(o.out, serialize_system(enriched.system), out);
  return kOk;
}

int cmd_construct(const Options& o, std::ostream& out) {
  const auto system = parse_system(read_file(o.system_file));
  const auto result = build_tower(system, o.N, BuildOptions{o.allow_small_M});
  write_output(o.out, write_tower_report(system, result), out);
  return kOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  const auto system = parse_system(read_file(o.system_file));
  const auto result = read_tower_report(system, read_file(o.selection_file));
  const auto report = verify_tower(system, result);
  bool pass = true;
  auto line = [&](const std::string& name, bool ok) {
    out << (ok ? "pass " : "FAIL ") << name << '\n';
    pass = pass && ok;
  };
  line("gap_spectrum", report.alpern.gap_spectrum);
  const auto verdicts = report.verdicts();
  for (const auto& [name, ok] : verdicts.named()) line(name, ok);
  const auto claimed = result.measures;
  const auto recomputed = tower_measures(system, result.params, result.columns);
  line("reported_measures", claimed == recomputed);
  for (const auto& d : report.alpern.diagnostics) out << "  " << d << '\n';
  for (const auto& d : report.diagnostics) out << "  " << d << '\n';
  if (o.oracle) {
    const auto grid = build_grid(system, result.params, o.grid_limit);
    const auto oracle = oracle_verify(grid, system, result);
    for (const auto& [name, ok] : oracle.verdicts.named()) line("oracle_" + name, ok);
    line("oracle_agrees", oracle.verdicts == verdicts);
    for (const auto& d : oracle.diagnostics) out << "  " << d << '\n';
  }
  return pass ? kOk : kVerificationFailed;
}

int cmd_render(const Options& o, std::ostream& out) {
  const auto system = parse_system(read_file(o.system_file));
  std::optional<TowerResult> result;
  if (!o.selection_file.empty()) result = read_tower_report(system, read_file(o.selection_file));
  RenderOptions ro;
  if (!o.column.empty()) ro.column = o.column;
  if (o.block != 0) ro.block = o.block;
  ro.subcolumns = o.N > 0 ? o.N : 1;
  const Column& column = o.column.empty() ? system.columns.front() : system.column(o.column);
  if (!o.levels.empty()) ro.levels = parse_level_range(o.levels, column.height());
  const TowerResult* r = result ? &*result : nullptr;
  if (o.format == "ascii") {
    write_output(o.out, render_ascii(system, r, ro), out);
  } else if (o.format == "svg") {
    write_output(o.out, render_svg(system, r, ro), out);
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown format '" + o.format + "'");
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Alpern towers with base independent of a partition, in exact arithmetic", "alpern"};
  app.require_subcommand(1);
  Options o;

  auto* build = app.add_subcommand("build", "Write an alpern-system v1 file");
  build->require_subcommand(1);
  auto* cyclic = build->add_subcommand("cyclic", "Single cyclic column");
  cyclic->add_option("--labels", o.labels, "Labels: compact digits or comma list with <cell>x<count>")->required();
  cyclic->add_option("--cells", o.cells, "Number of cells (default: largest label)");
  cyclic->add_option("--out", o.out, "Output file (default stdout)");
  auto* rotation = build->add_subcommand("rotation", "Rotation by p/q");
  rotation->add_option("--p", o.p)->required();
  rotation->add_option("--q", o.q)->required();
  rotation->add_option("--breaks", o.breaks, "Breakpoints on the 1/q grid, starting at 0")->required();
  rotation->add_option("--out", o.out);
  auto* rotation_cf = build->add_subcommand("rotation-cf", "First rich rotation among continued-fraction convergents");
  rotation_cf->add_option("--terms", o.terms, "Continued fraction terms a1,a2,...")->required();
  rotation_cf->add_option("--cells", o.cells)->required()->check(CLI::PositiveNumber);
  rotation_cf->add_option("--N", o.N)->required()->check(CLI::PositiveNumber);
  rotation_cf->add_option("--out", o.out);

  auto* construct = app.add_subcommand("construct", "Build the tower and write a JSON report");
  construct->add_option("system", o.system_file)->required();
  construct->add_option("--N", o.N)->required()->check(CLI::PositiveNumber);
  construct->add_flag("--allow-small-M", o.allow_small_M, "Proceed when the system is not rich enough");
  construct->add_option("--out", o.out);

  auto* verify = app.add_subcommand("verify", "Check a report against its system");
  verify->add_option("system", o.system_file)->required();
  verify->add_option("selection", o.selection_file)->required();
  verify->add_flag("--oracle", o.oracle, "Also run the brute-force grid oracle");
  verify->add_option("--grid-limit", o.grid_limit, "Largest grid the oracle may build");

  auto* render = app.add_subcommand("render", "Draw a column's rungs");
  render->add_option("system", o.system_file)->required();
  render->add_option("--selection", o.selection_file);
  render->add_option("--format", o.format)->check(CLI::IsMember({"ascii", "svg"}));
  render->add_option("--levels", o.levels, "Level range a..b (R-relative ends allowed)");
  render->add_option("--column", o.column);
  render->add_option("--block", o.block);
  render->add_option("--N", o.N, "Subcolumns per block when no selection is given");
  render->add_option("--out", o.out);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidInput;
  }

  try {
    if (cyclic->parsed()) return cmd_build_cyclic(o, out);
    if (rotation->parsed()) return cmd_build_rotation(o, out);
    if (rotation_cf->parsed()) return cmd_build_rotation_cf(o, out, err);
    if (construct->parsed()) return cmd_construct(o, out);
    if (verify->parsed()) return cmd_verify(o, out);
    if (render->parsed()) return cmd_render(o, out);
  } catch (const Error& e) {
    err << e.what() << '\n';
    return is_construction_error(e.code()) ? kInfeasible : kInvalidInput;
  }
  return kInvalidInput;
}

}  // namespace alpern::cli
