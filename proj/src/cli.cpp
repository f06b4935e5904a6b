#include "bec/cli.hpp"

#include "bec/gpesolve.hpp"
#include "bec/report.hpp"
#include "bec/sweep.hpp"
#include "bec/units.hpp"
#include "bec/variational.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

namespace bec::cli {

namespace {

double parse_double(std::string_view text)
{
  // std::from_chars for double is not available everywhere; strtod wants a
  // terminated buffer.
  const std::string buf(text);
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (buf.empty() || end != buf.c_str() + buf.size() || !std::isfinite(v))
    throw UsageError("not a finite number: '" + buf + "'");
  return v;
}

std::string trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

struct GridFlags {
  CLI::Option* rmax = nullptr;
  CLI::Option* points = nullptr;
  CLI::Option* dt = nullptr;
  CLI::Option* tol = nullptr;
  CLI::Option* max_iters = nullptr;
  CLI::Option* initial_width = nullptr;
  SolverConfig config;

  void attach(CLI::App& app)
  {
    rmax = app.add_option("--rmax", config.r_max, "Grid radius, oscillator lengths");
    points = app.add_option("--points", config.n_points, "Grid node count");
    dt = app.add_option("--dt", config.time_step, "Gradient-flow time step");
    tol = app.add_option("--tol", config.energy_tol, "Convergence threshold on |dE|/dt");
    max_iters = app.add_option("--max-iters", config.max_iters, "Iteration cap");
    initial_width =
        app.add_option("--initial-width", config.initial_width, "Width of the starting Gaussian");
  }

  SolverConfig validated() const
  {
    try {
      config.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return config;
  }
};

struct PhysicalFlags {
  CLI::Option* scattering = nullptr;
  CLI::Option* frequency = nullptr;
  CLI::Option* mass = nullptr;
  double scattering_length = 0.0;
  double frequency_hz = 0.0;
  double mass_kg = 0.0;

  void attach(CLI::App& app)
  {
    scattering = app.add_option("--scattering-length", scattering_length, "s-wave length, m");
    frequency = app.add_option("--trap-frequency", frequency_hz, "Trap frequency, Hz");
    mass = app.add_option("--mass", mass_kg, "Atomic mass, kg");
  }

  int given() const
  {
    return static_cast<int>(scattering->count() > 0) + static_cast<int>(frequency->count() > 0) +
           static_cast<int>(mass->count() > 0);
  }

  /// nullopt when none of the flags were given; UsageError when only some were.
  std::optional<PhysicalSystem> system(long atoms = 1) const
  {
    const int n = given();
    if (n == 0)
      return std::nullopt;
    if (n != 3)
      throw UsageError("--scattering-length, --trap-frequency and --mass go together");
    PhysicalSystem s{mass_kg, 2.0 * constants::pi * frequency_hz, scattering_length, atoms};
    try {
      s.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return s;
  }
};

struct OutputFlags {
  std::string format = "table";
  std::string path;

  void attach(CLI::App& app)
  {
    app.add_option("--format", format, "table, csv or json");
    app.add_option("--output", path, "Write the document here instead of stdout");
  }

  OutputFormat parsed() const
  {
    if (auto f = parse_format(format))
      return *f;
    throw UsageError("unknown format '" + format + "'");
  }
};

// Writes to the --output file when given, else to the command's stream.
class Sink {
public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback)
  {
    if (!path.empty()) {
      file_.open(path);
      if (!file_)
        throw UsageError("cannot open output file '" + path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

private:
  std::ofstream file_;
  std::ostream* stream_;
};

void write_json(std::ostream& out, const nlohmann::ordered_json& doc)
{
  out << doc.dump(2) << '\n';
}

std::vector<double> couplings_from(const std::string& range, const std::string& list)
{
  if (!range.empty() && !list.empty())
    throw UsageError("give either --coupling-range or --coupling-list, not both");
  if (!range.empty())
    return parse_range(range);
  if (!list.empty())
    return parse_list(list);
  return {};
}

// --threads, else BEC_LAB_THREADS, else the hardware concurrency.
unsigned resolve_threads(const CLI::Option* flag, long value)
{
  std::string source = "--threads";
  if (flag->count() == 0) {
    const char* env = std::getenv(kThreadsEnv);
    if (env == nullptr || *env == '\0')
      return std::max(1u, std::thread::hardware_concurrency());
    source = kThreadsEnv;
    const std::string text = trim(env);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
      throw UsageError(source + " must be a positive integer");
  }
  if (value < 1 || value > 4096)
    throw UsageError(source + " must be between 1 and 4096");
  return static_cast<unsigned>(value);
}

// --- analyze --------------------------------------------------------------

struct AnalyzeCommand {
  CLI::App* app = nullptr;
  int dimension = 3;
  double coupling = 0.0;
  long atoms = 0;
  CLI::Option* coupling_opt = nullptr;
  CLI::Option* atoms_opt = nullptr;
  PhysicalFlags physical;
  bool grid = false;
  GridFlags grid_flags;
  std::string profile_path;
  OutputFlags output;

  void attach(CLI::App& root)
  {
    app = root.add_subcommand("analyze", "Classify one (dimension, coupling) point");
    app->add_option("--dimension", dimension, "Spatial dimension")
        ->required()
        ->check(CLI::Range(1, 3));
    coupling_opt = app->add_option("--coupling", coupling, "Dimensionless coupling g");
    atoms_opt = app->add_option("--atoms", atoms, "Atom number (with physical flags, d = 3)");
    physical.attach(*app);
    app->add_flag("--grid", grid, "Also relax on the radial grid");
    grid_flags.attach(*app);
    app->add_option("--profile-out", profile_path, "Dump the relaxed profile (needs --grid)");
    output.attach(*app);
  }

  int execute(std::ostream& out, std::ostream& err) const
  {
    const auto format = output.parsed();
    const bool have_coupling = coupling_opt->count() > 0;
    const bool have_physical = atoms_opt->count() > 0 || physical.given() > 0;
    if (have_coupling && have_physical)
      throw UsageError("--coupling conflicts with --atoms/--scattering-length/--trap-frequency/--mass");
    if (!have_coupling && !have_physical)
      throw UsageError("give --coupling or the physical parameters");
    if (!profile_path.empty() && !grid)
      throw UsageError("--profile-out needs --grid");

    double g = coupling;
    std::optional<long> atom_count;
    if (have_physical) {
      if (dimension != 3)
        throw UsageError("physical parameters are only defined for --dimension 3");
      if (atoms_opt->count() == 0 || physical.given() != 3)
        throw UsageError("physical input needs --atoms, --scattering-length, --trap-frequency and --mass");
      if (atoms < 1)
        throw UsageError("--atoms must be at least 1");
      g = coupling_from_physical(*physical.system(atoms)).g;
      atom_count = atoms;
    }

    const auto report = classify(AnsatzProblem(dimension, g));
    SweepRow row = evaluate_point(dimension, g, Engine::Variational);
    row.atom_count = atom_count;

    std::optional<RelaxResult> relaxed;
    std::optional<Observables> obs;
    if (grid) {
      relaxed = relax(grid_flags.validated(), dimension, g);
      row.grid_status = relaxed->status;
      if (relaxed->status == RelaxStatus::Converged) {
        obs = observables(relaxed->state);
        row.rms_radius_grid = obs->rms_radius;
        row.energy_grid = obs->energy.total;
      }
      if (!profile_path.empty()) {
        std::ofstream file(profile_path);
        if (!file)
          throw UsageError("cannot open profile file '" + profile_path + "'");
        write_profile(file, relaxed->state);
      }
    }

    Sink sink(output.path, out);
    auto& os = sink.get();
    switch (format) {
    case OutputFormat::Csv:
      write_csv(os, {row});
      break;
    case OutputFormat::Json: {
      auto doc = make_document("analyze");
      doc["dimension"] = dimension;
      doc["coupling"] = g;
      doc["atoms"] = atom_count ? nlohmann::ordered_json(*atom_count) : nullptr;
      doc["variational"] = to_json(report);
      if (relaxed) {
        nlohmann::ordered_json gj;
        gj["status"] = to_string(relaxed->status);
        gj["iterations"] = relaxed->state.iterations;
        gj["observables"] = obs ? to_json(*obs) : nlohmann::ordered_json(nullptr);
        gj["virial_residual"] =
            obs ? nlohmann::ordered_json(virial_residual(relaxed->state)) : nullptr;
        doc["grid"] = std::move(gj);
      } else {
        doc["grid"] = nullptr;
      }
      write_json(os, doc);
      break;
    }
    case OutputFormat::Table: {
      os << "dimension       " << dimension << '\n';
      os << "coupling        " << format_number(g) << '\n';
      if (atom_count)
        os << "atoms           " << *atom_count << '\n';
      os << "classification  " << to_string(report.classification) << '\n';
      for (const auto& p : report.points)
        os << "  " << to_string(p.kind) << "  sigma=" << format_number(p.sigma)
           << "  energy=" << format_number(p.energy.total)
           << "  curvature=" << format_number(p.curvature) << '\n';
      if (report.mean_radius)
        os << "mean_radius     " << format_number(*report.mean_radius) << '\n';
      if (report.barrier_height)
        os << "barrier         " << format_number(*report.barrier_height) << '\n';
      if (relaxed) {
        os << "grid status     " << to_string(relaxed->status) << " after "
           << relaxed->state.iterations << " steps\n";
        if (obs) {
          os << "grid energy     total=" << format_number(obs->energy.total)
             << " kinetic=" << format_number(obs->energy.kinetic)
             << " potential=" << format_number(obs->energy.potential)
             << " interaction=" << format_number(obs->energy.interaction) << '\n';
          os << "grid mu         " << format_number(obs->chemical_potential) << '\n';
          os << "grid rms        " << format_number(obs->rms_radius) << '\n';
          os << "grid psi(0)     " << format_number(obs->central_density_amplitude) << '\n';
          os << "grid virial     " << format_number(virial_residual(relaxed->state)) << '\n';
        }
      }
      break;
    }
    }

    if (relaxed && relaxed->status == RelaxStatus::NonConverged) {
      err << "grid relaxation did not converge within " << relaxed->state.iterations
          << " steps\n";
      return kExitNumerical;
    }
    return kExitOk;
  }
};

// --- critical -------------------------------------------------------------

struct CriticalCommand {
  CLI::App* app = nullptr;
  int dimension = 3;
  std::string engine = "variational";
  GridFlags grid_flags;
  CLI::Option* g_lo_opt = nullptr;
  CLI::Option* g_hi_opt = nullptr;
  double g_lo = 0.0;
  double g_hi = 0.0;
  double tol_g = 0.02;
  PhysicalFlags physical;
  OutputFlags output;

  void attach(CLI::App& root)
  {
    app = root.add_subcommand("critical", "Locate the collapse threshold");
    app->add_option("--dimension", dimension, "Spatial dimension")
        ->required()
        ->check(CLI::Range(1, 3));
    app->add_option("--engine", engine, "variational, grid or both");
    grid_flags.attach(*app);
    g_lo_opt = app->add_option("--g-lo", g_lo, "Bisection end that collapses");
    g_hi_opt = app->add_option("--g-hi", g_hi, "Bisection end that converges");
    app->add_option("--tol-g", tol_g, "Bracket width to stop at");
    physical.attach(*app);
    output.attach(*app);
  }

  int execute(std::ostream& out) const
  {
    const auto format = output.parsed();
    if (format == OutputFormat::Csv)
      throw UsageError("critical supports --format table or json");
    if (engine != "variational" && engine != "grid" && engine != "both")
      throw UsageError("unknown engine '" + engine + "'");
    const bool want_variational = engine != "grid";
    const bool want_grid = engine != "variational";
    if (want_grid && dimension == 1)
      throw UsageError("no collapse threshold exists in d = 1; the grid engine has nothing to find");
    const auto system = physical.system();
    if (system && dimension == 2)
      throw UsageError("physical parameters are only defined for d = 1 and d = 3");

    auto doc = make_document("critical");
    doc["dimension"] = dimension;
    std::ostringstream table;
    table << "dimension  " << dimension << '\n';

    const auto n_max_json = [&](double g_c) -> nlohmann::ordered_json {
      if (!system)
        return nullptr;
      if (dimension == 1)
        return "unbounded";
      return static_cast<long>(std::floor(critical_atom_number(*system, g_c)));
    };

    if (want_variational) {
      const auto cp = critical_coupling(dimension);
      nlohmann::ordered_json vj;
      if (cp) {
        vj["threshold"] = true;
        vj["g_c"] = cp->coupling;
        vj["sigma_c"] = cp->sigma ? nlohmann::ordered_json(*cp->sigma) : nullptr;
        vj["max_atoms"] = n_max_json(cp->coupling);
        table << "variational g_c = " << format_number(cp->coupling);
        if (cp->sigma)
          table << "  sigma_c = " << format_number(*cp->sigma);
        table << '\n';
        if (!vj["max_atoms"].is_null())
          table << "variational N_max = " << vj["max_atoms"].get<long>() << '\n';
      } else {
        vj["threshold"] = false;
        vj["g_c"] = nullptr;
        vj["sigma_c"] = nullptr;
        vj["max_atoms"] = system ? nlohmann::ordered_json("unbounded") : nullptr;
        table << "variational: no finite threshold\n";
        if (system)
          table << "variational N_max = unbounded\n";
      }
      doc["variational"] = std::move(vj);
    }

    if (want_grid) {
      const double g_var = critical_coupling(dimension)->coupling;
      const double lo = g_lo_opt->count() ? g_lo : g_var - 0.5;
      const double hi = g_hi_opt->count() ? g_hi : 0.5 * g_var;
      const auto bracket = [&] {
        try {
          return critical_coupling_grid(grid_flags.validated(), dimension, lo, hi, tol_g);
        } catch (const std::invalid_argument& e) {
          throw UsageError(e.what());
        }
      }();
      const double centre = 0.5 * (bracket.g_lo + bracket.g_hi);
      nlohmann::ordered_json gj;
      gj["g_lo"] = bracket.g_lo;
      gj["g_hi"] = bracket.g_hi;
      gj["g_c"] = centre;
      gj["probes"] = bracket.probes;
      gj["max_atoms"] = n_max_json(centre);
      table << "grid g_c in [" << format_number(bracket.g_lo) << ", "
            << format_number(bracket.g_hi) << "]  centre " << format_number(centre) << "  ("
            << bracket.probes << " relaxations)\n";
      if (!gj["max_atoms"].is_null())
        table << "grid N_max = " << gj["max_atoms"].get<long>() << '\n';
      doc["grid"] = std::move(gj);
    }

    Sink sink(output.path, out);
    if (format == OutputFormat::Json)
      write_json(sink.get(), doc);
    else
      sink.get() << table.str();
    return kExitOk;
  }
};

// --- sweep / phase --------------------------------------------------------

struct SweepCommand {
  CLI::App* app = nullptr;
  int dimension = 3;
  std::string range;
  std::string list;
  std::string atoms_list;
  std::string engine = "variational";
  GridFlags grid_flags;
  PhysicalFlags physical;
  OutputFlags output;
  long threads = 0;
  CLI::Option* threads_opt = nullptr;

  void attach(CLI::App& root)
  {
    app = root.add_subcommand("sweep", "Radius and energy across couplings");
    app->add_option("--dimension", dimension, "Spatial dimension")
        ->required()
        ->check(CLI::Range(1, 3));
    app->add_option("--coupling-range", range, "lo:hi:steps");
    app->add_option("--coupling-list", list, "Comma-separated couplings");
    app->add_option("--atoms-list", atoms_list,
                    "Comma-separated atom numbers (d = 3, with physical flags)");
    app->add_option("--engine", engine, "variational, grid or both");
    grid_flags.attach(*app);
    physical.attach(*app);
    output.attach(*app);
    threads_opt = app->add_option("--threads", threads, "Worker threads");
  }

  int execute(std::ostream& out) const
  {
    const auto format = output.parsed();
    Engine eng = Engine::Variational;
    if (engine == "grid")
      eng = Engine::Grid;
    else if (engine == "both")
      eng = Engine::Both;
    else if (engine != "variational")
      throw UsageError("unknown engine '" + engine + "'");

    SweepSpec spec;
    if (!atoms_list.empty()) {
      if (!range.empty() || !list.empty())
        throw UsageError("--atoms-list replaces the coupling flags");
      if (dimension != 3)
        throw UsageError("--atoms-list needs --dimension 3");
      const auto system = physical.system();
      if (!system)
        throw UsageError("--atoms-list needs --scattering-length, --trap-frequency and --mass");
      std::vector<long> counts;
      for (double v : parse_list(atoms_list)) {
        if (v < 1.0 || v != std::floor(v))
          throw UsageError("atom numbers must be positive integers");
        counts.push_back(static_cast<long>(v));
      }
      try {
        spec = atom_sweep(*system, std::move(counts), eng);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
    } else {
      if (physical.given() > 0)
        throw UsageError("physical flags only apply with --atoms-list");
      spec.coupling_values = couplings_from(range, list);
      if (spec.coupling_values.empty())
        throw UsageError("give --coupling-range, --coupling-list or --atoms-list");
      spec.dimension = dimension;
      spec.engine = eng;
    }
    if (eng != Engine::Variational)
      spec.solver = grid_flags.validated();
    spec.threads = resolve_threads(threads_opt, threads);
    try {
      spec.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }

    const auto rows = radius_vs_coupling(spec);
    Sink sink(output.path, out);
    auto& os = sink.get();
    switch (format) {
    case OutputFormat::Csv:
      write_csv(os, rows);
      break;
    case OutputFormat::Table:
      write_table(os, rows);
      break;
    case OutputFormat::Json: {
      auto doc = make_document("sweep");
      doc["dimension"] = spec.dimension;
      doc["engine"] = to_string(eng);
      auto arr = nlohmann::ordered_json::array();
      for (const auto& r : rows)
        arr.push_back(to_json(r));
      doc["rows"] = std::move(arr);
      write_json(os, doc);
      break;
    }
    }
    return kExitOk;
  }
};

struct PhaseCommand {
  CLI::App* app = nullptr;
  std::vector<int> dimensions{1, 2, 3};
  std::string range;
  std::string list;
  OutputFlags output;
  long threads = 0;
  CLI::Option* threads_opt = nullptr;

  void attach(CLI::App& root)
  {
    app = root.add_subcommand("phase", "Variational classification over (d, g)");
    app->add_option("--dimension", dimensions, "Dimensions to include (default 1,2,3)")
        ->delimiter(',')
        ->check(CLI::Range(1, 3));
    app->add_option("--coupling-range", range, "lo:hi:steps");
    app->add_option("--coupling-list", list, "Comma-separated couplings");
    output.attach(*app);
    threads_opt = app->add_option("--threads", threads, "Worker threads");
  }

  int execute(std::ostream& out) const
  {
    const auto format = output.parsed();
    const auto couplings = couplings_from(range, list);
    if (couplings.empty())
      throw UsageError("give --coupling-range or --coupling-list");
    const auto cells = phase_diagram(dimensions, couplings, resolve_threads(threads_opt, threads));

    Sink sink(output.path, out);
    auto& os = sink.get();
    switch (format) {
    case OutputFormat::Csv:
      write_phase_csv(os, cells);
      break;
    case OutputFormat::Table:
      write_phase_table(os, cells);
      break;
    case OutputFormat::Json: {
      auto doc = make_document("phase");
      doc["dimensions"] = dimensions;
      doc["couplings"] = couplings;
      auto arr = nlohmann::ordered_json::array();
      for (const auto& c : cells)
        arr.push_back(to_json(c));
      doc["cells"] = std::move(arr);
      write_json(os, doc);
      break;
    }
    }
    return kExitOk;
  }
};

// Pulls `--config path` out of the argument list and splices its entries in
// right after the subcommand name, skipping keys the command line already
// sets or the subcommand does not know.
std::vector<std::string> apply_config(std::vector<std::string> args, const CLI::App& root)
{
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size())
        throw UsageError("--config needs a path");
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                 args.begin() + static_cast<std::ptrdiff_t>(i + 2));
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (path.empty())
    return args;

  std::ifstream file(path);
  if (!file)
    throw UsageError("cannot read config file '" + path + "'");
  const auto entries = read_config(file);

  const auto sub_pos = std::find_if(args.begin(), args.end(),
                                    [](const std::string& a) { return a.rfind("-", 0) != 0; });
  if (sub_pos == args.end())
    return args;
  const CLI::App* sub = nullptr;
  try {
    sub = root.get_subcommand(*sub_pos);
  } catch (const CLI::OptionNotFound&) {
    return args;
  }

  const auto given = [&](const std::string& flag) {
    return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
  };

  std::vector<std::string> injected;
  for (const auto& [key, value] : entries) {
    const std::string flag = "--" + key;
    const CLI::Option* opt = sub->get_option_no_throw(flag);
    if (opt == nullptr || given(flag))
      continue;
    if (opt->get_expected_min() == 0) {
      if (value == "true" || value == "1" || value == "yes" || value == "on")
        injected.push_back(flag);
      else if (value != "false" && value != "0" && value != "no" && value != "off")
        throw UsageError("config key '" + key + "' expects a boolean");
    } else {
      injected.push_back(flag + "=" + value);
    }
  }
  args.insert(sub_pos + 1, injected.begin(), injected.end());
  return args;
}

}  // namespace

std::vector<double> parse_range(std::string_view text)
{
  const auto first = text.find(':');
  const auto second = first == std::string_view::npos ? first : text.find(':', first + 1);
  if (second == std::string_view::npos || text.find(':', second + 1) != std::string_view::npos)
    throw UsageError("coupling range must look like lo:hi:steps");
  const double lo = parse_double(text.substr(0, first));
  const double hi = parse_double(text.substr(first + 1, second - first - 1));
  const auto steps_text = trim(text.substr(second + 1));
  long steps = 0;
  const auto [ptr, ec] =
      std::from_chars(steps_text.data(), steps_text.data() + steps_text.size(), steps);
  if (ec != std::errc() || ptr != steps_text.data() + steps_text.size() || steps < 1)
    throw UsageError("range step count must be a positive integer");
  if (lo > hi)
    throw UsageError("range lower end exceeds upper end");
  if (steps == 1) {
    if (lo != hi)
      throw UsageError("a single-step range needs lo == hi");
    return {lo};
  }
  std::vector<double> values(static_cast<std::size_t>(steps));
  for (long i = 0; i < steps; ++i)
    values[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) /
                                                    static_cast<double>(steps - 1);
  values.back() = hi;
  return values;
}

std::vector<double> parse_list(std::string_view text)
{
  std::vector<double> values;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    const auto token = trim(text.substr(start, comma == std::string_view::npos
                                                   ? std::string_view::npos
                                                   : comma - start));
    values.push_back(parse_double(token));
    if (comma == std::string_view::npos)
      break;
    start = comma + 1;
  }
  return values;
}

std::map<std::string, std::string> read_config(std::istream& in)
{
  std::map<std::string, std::string> entries;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    const auto content = trim(line);
    if (content.empty())
      continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos)
      throw UsageError("config line " + std::to_string(number) + " is not 'key = value'");
    auto key = trim(std::string_view(content).substr(0, eq));
    auto value = trim(std::string_view(content).substr(eq + 1));
    if (key.empty())
      throw UsageError("config line " + std::to_string(number) + " has an empty key");
    entries[std::move(key)] = std::move(value);
  }
  return entries;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  CLI::App root{"Stability of trapped condensates: Gaussian variational and radial-grid analysis",
                "bec-lab"};
  root.require_subcommand(1);
  root.set_version_flag("--version", "bec-lab 1.0");

  AnalyzeCommand analyze;
  CriticalCommand critical;
  SweepCommand sweep;
  PhaseCommand phase;
  analyze.attach(root);
  critical.attach(root);
  sweep.attach(root);
  phase.attach(root);

  try {
    auto expanded = apply_config(args, root);
    std::reverse(expanded.begin(), expanded.end());
    root.parse(expanded);
  } catch (const CLI::ParseError& e) {
    const int code = root.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (analyze.app->parsed())
      return analyze.execute(out, err);
    if (critical.app->parsed())
      return critical.execute(out);
    if (sweep.app->parsed())
      return sweep.execute(out);
    return phase.execute(out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const BracketError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err)
{
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i)
    args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace bec::cli
