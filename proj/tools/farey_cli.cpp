#include <CLI11.hpp>

#include <atomic>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "farey/farey.hpp"

using namespace farey;

namespace {

enum Exit { kOk = 0, kUsage = 1, kValidation = 2, kInternal = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Source {
  long long level = 0;
  std::string in;
  bool normalize = false;
};

void add_source(CLI::App* cmd, Source& s, bool with_normalize = true) {
  auto* level = cmd->add_option("--level", s.level, "Build the unimodular symbol of Gamma0(N)");
  auto* in = cmd->add_option("--in", s.in, "Read a symbol from a JSON file");
  level->excludes(in);
  in->excludes(level);
  if (with_normalize) cmd->add_flag("--normalize", s.normalize, "Normalize before use");
}

std::string read_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write_text(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(path);
  if (!os) throw UsageError("cannot write " + path);
  os << text;
}

ExtendedFareySymbol load(const Source& s, const NormalizeOptions& opt = NormalizeOptions::from_env()) {
  ExtendedFareySymbol f;
  if (!s.in.empty()) {
    f = parse_symbol(read_file(s.in));
    f.validate();
  } else if (s.level > 0) {
    f = build_unimodular(gamma0_oracle(s.level));
  } else {
    throw UsageError("one of --level (positive) or --in is required");
  }
  return s.normalize ? normalize(f, opt) : f;
}

IMat parse_matrix(const std::string& text) {
  std::vector<Int> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      v.emplace_back(item);
    } catch (const std::invalid_argument&) {
      throw UsageError("bad matrix entry '" + item + "'");
    }
  }
  if (v.size() != 4) throw UsageError("--matrix expects a,b,c,d");
  return IMat(v[0], v[1], v[2], v[3]);
}

json scan_line(const LevelReport& r) {
  json j = {{"level", r.level}, {"size", r.size}, {"ok", r.ok()}, {"failures", r.failures}};
  j["counts"] = counts_json(r.counts);
  return j;
}

int scan(long long from, long long to, unsigned jobs) {
  if (from < 1 || to < from) throw UsageError("need 1 <= --from <= --to");
  const auto count = static_cast<std::size_t>(to - from + 1);
  std::vector<LevelReport> reports(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < count;) {
      const long long n = from + static_cast<long long>(k);
      try {
        reports[k] = verify_level(n);
      } catch (const std::exception& e) {
        reports[k].level = n;
        reports[k].failures.emplace_back(e.what());
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < std::max(1u, jobs); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  std::size_t failed = 0;
  for (const auto& r : reports) {
    std::cout << scan_line(r).dump() << "\n";
    failed += !r.ok();
  }
  std::cerr << "scan: " << count - failed << "/" << count << " levels passed\n";
  return failed ? kInternal : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Farey symbols of congruence subgroups"};
  app.require_subcommand(1);

  long long build_level = 0;
  std::string build_out;
  auto* build = app.add_subcommand("build", "Unimodular Farey symbol of Gamma0(N)");
  build->add_option("--level", build_level, "Level N")->required();
  build->add_option("--out", build_out, "Output file (default stdout)");

  Source norm_src;
  std::string norm_out, strategy = "adjacent", pivots = "cheapest";
  bool trace = false, validate = false;
  auto* norm = app.add_subcommand("normalize", "Normalized Farey symbol");
  add_source(norm, norm_src, false);
  norm->add_option("--out", norm_out, "Output file (default stdout)");
  norm->add_flag("--trace", trace, "One JSON line per step on stderr");
  norm->add_flag("--validate", validate, "Validate every intermediate polygon");
  norm->add_option("--strategy", strategy, "Hyperbolic step layout")
      ->check(CLI::IsMember({"adjacent", "alternate"}));
  norm->add_option("--pivots", pivots, "Pivot choice")->check(CLI::IsMember({"cheapest", "first"}));

  Source info_src;
  auto* info = app.add_subcommand("info", "Counts, cusps and generators");
  add_source(info, info_src);

  Source pres_src;
  auto* pres = app.add_subcommand("presentation", "Presentation of the augmentation ideal");
  add_source(pres, pres_src);

  Source mem_src;
  std::string matrix;
  auto* member = app.add_subcommand("member", "Membership test with a word in the gluings");
  add_source(member, mem_src);
  member->add_option("--matrix", matrix, "Entries a,b,c,d")->required();

  Source ren_src;
  std::string style = "chords", ren_out;
  RenderSpec spec;
  auto* render_cmd = app.add_subcommand("render", "SVG chord diagram or fundamental polygon");
  add_source(render_cmd, ren_src);
  render_cmd->add_option("--style", style, "chords, halfplane or disk")
      ->check(CLI::IsMember({"chords", "halfplane", "disk"}));
  render_cmd->add_option("--out", ren_out, "Output file (default stdout)");
  render_cmd->add_option("--width", spec.width, "Width in pixels");
  render_cmd->add_option("--height", spec.height, "Height in pixels");
  render_cmd->add_option("--xmin", spec.x_min, "Left end of the halfplane view");
  render_cmd->add_option("--xmax", spec.x_max, "Right end of the halfplane view");
  render_cmd->add_option("--stroke", spec.stroke, "Stroke colour");

  long long from = 1, to = 1;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  auto* scan_cmd = app.add_subcommand("scan", "Run the invariant suite over a range of levels");
  scan_cmd->add_option("--from", from, "First level")->required();
  scan_cmd->add_option("--to", to, "Last level")->required();
  scan_cmd->add_option("--jobs", jobs, "Worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*build) {
      write_text(serialize(build_unimodular(gamma0_oracle(build_level)), 2) + "\n", build_out);
    } else if (*norm) {
      NormalizeOptions opt = NormalizeOptions::from_env();
      opt.strategy = strategy == "alternate" ? HyperbolicStrategy::AdjacentAlt
                                             : HyperbolicStrategy::Adjacent;
      opt.pivots = pivots == "first" ? PivotRule::First : PivotRule::Cheapest;
      if (validate) opt.validate_every = 1;
      if (trace) opt.on_step = [](const StepInfo& s) { std::cerr << step_json(s).dump() << "\n"; };
      const auto f = load(norm_src);
      write_text(serialize(normalize(f, opt), 2) + "\n", norm_out);
    } else if (*info) {
      std::cout << info_json(load(info_src)).dump(2) << "\n";
    } else if (*pres) {
      std::cout << presentation_json(load(pres_src)).dump(2) << "\n";
    } else if (*member) {
      const IMat g = parse_matrix(matrix);
      const auto f = load(mem_src);
      const auto w = WordSolver(f).express(g);
      json out = {{"matrix", matrix_json(g)}, {"member", w.has_value()}};
      if (w) out["word"] = word_json(*w);
      std::cout << out.dump() << "\n";
    } else if (*render_cmd) {
      spec.style = parse_style(style);
      write_text(render(load(ren_src), spec), ren_out);
    } else if (*scan_cmd) {
      return scan(from, to, jobs);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.is_internal() ? kInternal : kValidation;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kOk;
}
