#include "cli.hpp"

#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "g2g/config.hpp"
#include "g2g/error.hpp"
#include "g2g/io.hpp"
#include "g2g/model.hpp"
#include "g2g/report.hpp"
#include "g2g/sim.hpp"
#include "g2g/stats.hpp"

namespace g2g::cli {

namespace {

class IoError : public Error {
 public:
  using Error::Error;
};

std::string read_file(const std::string& path, std::istream& stdin_stream) {
  std::ostringstream buf;
  if (path == "-") {
    buf << stdin_stream.rdbuf();
    return buf.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path);
  return buf.str();
}

void write_file(const std::string& path, const std::string& content, std::ostream& out) {
  if (path == "-") {
    out << content;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write " + path);
  f << content;
  f.flush();
  if (!f) throw IoError("cannot write " + path);
}

SimulationConfig load_config(const std::string& path, const std::vector<std::string>& overrides,
                             std::istream& in) {
  KeyValues kv;
  if (!path.empty()) kv = parse_key_values(read_file(path, in));
  apply_overrides(kv, overrides);
  return build_config(kv);
}

std::string fmt_ms(double seconds, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, seconds * 1e3);
  return buf;
}

// Records as they read back from CSV, so every report matches what a later
// `analyze` of the written file computes.
std::vector<MeasurementRecord> persisted(const std::vector<MeasurementRecord>& records) {
  return read_records_csv(write_records_csv(records));
}

struct SimulateArgs {
  std::string config;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<int> n;
  std::string records_path;
  std::string report_path;
  std::string device_path;
};

int cmd_simulate(const SimulateArgs& a, std::istream& in, std::ostream& out) {
  auto cfg = load_config(a.config, a.overrides, in);
  if (a.seed) cfg.campaign.seed = *a.seed;
  if (a.n) cfg.campaign.n_measurements = *a.n;
  const PipelineModel& p = cfg.pipeline;
  cfg.campaign.validate(p);

  std::vector<MeasurementRecord> records;
  if (!a.device_path.empty()) {
    auto capture = render_capture(p, cfg.campaign);
    write_file(a.device_path, write_device_stream(capture.stream, capture.event_ticks), out);
    records = std::move(capture.records);
  } else {
    records = run_campaign(p, cfg.campaign);
  }

  const std::string csv = write_records_csv(records);
  if (!a.records_path.empty()) write_file(a.records_path, csv, out);
  const auto delays = measured_delays(read_records_csv(csv));
  const Report report = make_report(delays, p.trapezoid());
  if (!a.report_path.empty()) write_file(a.report_path, report_json(report).dump(2) + "\n", out);
  if (a.records_path != "-" && a.report_path != "-" && a.device_path != "-") {
    out << report_text(report);
  }
  return kOk;
}

struct SweepArgs {
  std::string config;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<int> n;
  std::string table_path;
  unsigned jobs = 1;
};

int cmd_sweep(const SweepArgs& a, std::istream& in, std::ostream& out) {
  auto cfg = load_config(a.config, a.overrides, in);
  if (a.seed) cfg.campaign.seed = *a.seed;
  if (a.n) cfg.campaign.n_measurements = *a.n;
  if (cfg.f_cam_list.empty()) throw ConfigError("sweep needs a non-empty f_cam_list");

  std::vector<PipelineModel> pipelines;
  for (std::size_t i = 0; i < cfg.f_cam_list.size(); ++i) {
    pipelines.push_back(cfg.pipeline_for_rate(i));
    cfg.campaign.validate(pipelines.back());
  }

  auto campaign = [&cfg](const PipelineModel& p) {
    const auto delays = measured_delays(persisted(run_campaign(p, cfg.campaign)));
    return make_report(delays, p.trapezoid());
  };
  // Campaigns are independent; results keep the input rate order.
  std::vector<Report> reports(pipelines.size());
  const std::size_t jobs = std::max(1u, a.jobs);
  for (std::size_t start = 0; start < pipelines.size(); start += jobs) {
    std::vector<std::future<Report>> batch;
    for (std::size_t i = start; i < std::min(start + jobs, pipelines.size()); ++i) {
      batch.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred,
                                 campaign, std::cref(pipelines[i])));
    }
    for (std::size_t i = 0; i < batch.size(); ++i) reports[start + i] = batch[i].get();
  }

  std::string csv = "f_cam_hz,n,min_ms,mean_ms,ci95_lo_ms,ci95_hi_ms,max_ms,std_ms,width_ms,theory_width_ms\n";
  char line[256];
  std::snprintf(line, sizeof line, "%10s %6s %9s %21s %9s %8s %9s\n", "rate_hz", "n", "min_ms",
                "meanCI_ms", "max_ms", "std_ms", "theory_w");
  std::string table = line;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    const double rate = pipelines[i].f_cam;
    const double theory_width = 1.0 / pipelines[i].f_cam + 1.0 / pipelines[i].f_dis;
    if (!r.stats) {
      std::snprintf(line, sizeof line, "%.6g,%zu,,,,,,,,%s\n", rate, r.n,
                    fmt_ms(theory_width, 3).c_str());
      csv += line;
      std::snprintf(line, sizeof line, "%10.6g %6zu   (too few detections)\n", rate, r.n);
      table += line;
      continue;
    }
    const auto& s = *r.stats;
    std::snprintf(line, sizeof line, "%.6g,%zu,%s,%s,%s,%s,%s,%s,%s,%s\n", rate, r.n,
                  fmt_ms(s.min_s, 3).c_str(), fmt_ms(s.mean_s, 3).c_str(),
                  fmt_ms(s.ci95_lo_s, 3).c_str(), fmt_ms(s.ci95_hi_s, 3).c_str(),
                  fmt_ms(s.max_s, 3).c_str(), fmt_ms(s.std_s, 3).c_str(),
                  fmt_ms(s.width_s, 3).c_str(), fmt_ms(theory_width, 3).c_str());
    csv += line;
    const std::string ci = fmt_ms(s.ci95_lo_s, 1) + " .. " + fmt_ms(s.ci95_hi_s, 1);
    std::snprintf(line, sizeof line, "%10.6g %6zu %9s %21s %9s %8s %9s\n", rate, r.n,
                  fmt_ms(s.min_s, 1).c_str(), ci.c_str(), fmt_ms(s.max_s, 1).c_str(),
                  fmt_ms(s.std_s, 1).c_str(), fmt_ms(theory_width, 1).c_str());
    table += line;
  }
  if (!a.table_path.empty()) write_file(a.table_path, csv, out);
  if (a.table_path != "-") out << table;
  return kOk;
}

struct AnalyzeArgs {
  std::string records_path;
  std::string config;
  std::vector<std::string> overrides;
  std::optional<double> f_cam;
  std::optional<double> f_dis;
  std::string report_path = "-";
  bool text = false;
};

int cmd_analyze(const AnalyzeArgs& a, std::istream& in, std::ostream& out) {
  const auto records = read_records_csv(read_file(a.records_path, in));
  const auto delays = measured_delays(records);
  std::optional<TrapezoidModel> theory;
  if (!a.config.empty() || !a.overrides.empty()) {
    const auto cfg = load_config(a.config, a.overrides, in);
    cfg.pipeline.validate();
    theory = cfg.pipeline.trapezoid();
  } else if (a.f_cam && a.f_dis && delays.size() >= 10) {
    theory = fit_trapezoid(delays, *a.f_cam, *a.f_dis).estimate;
  } else if (a.f_cam.has_value() != a.f_dis.has_value()) {
    throw ConfigError("--f-cam and --f-dis must be given together");
  }
  const Report report = make_report(delays, theory);
  if (a.text) {
    out << report_text(report);
  } else {
    write_file(a.report_path, report_json(report).dump(2) + "\n", out);
  }
  return kOk;
}

struct IngestArgs {
  std::string input = "-";
  DetectorConfig detector;
  std::string records_path = "-";
  std::string report_path;
};

int cmd_ingest(const IngestArgs& a, std::istream& in, std::ostream& out) {
  a.detector.validate();
  const auto capture = parse_device_stream(read_file(a.input, in));
  const auto records = split_trials(capture.stream, capture.event_ticks, a.detector);
  const std::string csv = write_records_csv(records);
  write_file(a.records_path, csv, out);
  if (!a.report_path.empty()) {
    const Report report = make_report(measured_delays(read_records_csv(csv)), std::nullopt);
    write_file(a.report_path, report_json(report).dump(2) + "\n", out);
  }
  return kOk;
}

struct ModelArgs {
  double f_cam = 50.0;
  double f_dis = 60.0;
  double t_proc_ms = 0.0;
  double t_min_ms = 0.0;
  std::string pdf_path;
  bool json = false;
};

int cmd_model(const ModelArgs& a, std::ostream& out) {
  const TrapezoidModel m{a.t_proc_ms * 1e-3, a.t_min_ms * 1e-3, a.f_cam, a.f_dis};
  m.validate();
  const auto s = stats(m);
  if (a.json) {
    nlohmann::ordered_json j = {{"min_ms", s.min_s * 1e3},
                                {"mean_ms", s.mean_s * 1e3},
                                {"max_ms", s.max_s * 1e3},
                                {"std_ms", s.std_s * 1e3},
                                {"width_ms", (s.max_s - s.min_s) * 1e3}};
    out << j.dump(2) << "\n";
  } else {
    out << "min ms    " << fmt_ms(s.min_s, 2) << "\n"
        << "mean ms   " << fmt_ms(s.mean_s, 2) << "\n"
        << "max ms    " << fmt_ms(s.max_s, 2) << "\n"
        << "std ms    " << fmt_ms(s.std_s, 2) << "\n"
        << "width ms  " << fmt_ms(s.max_s - s.min_s, 2) << "\n";
  }
  if (!a.pdf_path.empty()) {
    constexpr int kPoints = 1000;
    std::string table = "t_ms,pdf_per_s,cdf\n";
    char line[128];
    for (int i = 0; i < kPoints; ++i) {
      const double t = s.min_s + (s.max_s - s.min_s) * i / (kPoints - 1);
      std::snprintf(line, sizeof line, "%.6f,%.9g,%.9g\n", t * 1e3, pdf(m, t), cdf(m, t));
      table += line;
    }
    write_file(a.pdf_path, table, out);
  }
  return kOk;
}

void add_campaign_options(CLI::App* sub, std::string& config, std::vector<std::string>& overrides,
                          std::optional<std::uint64_t>& seed, std::optional<int>& n) {
  sub->add_option("-c,--config", config, "key = value campaign config file")->required();
  sub->add_option("--set", overrides, "override a config key (key=value, repeatable, last wins)");
  sub->add_option("--seed", seed, "RNG seed (default: config `seed`, else 1)");
  sub->add_option("-n,--n-measurements", n, "number of measurements per campaign");
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Glass-to-glass video latency toolkit"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "run one simulated measurement campaign");
  add_campaign_options(simulate, sim.config, sim.overrides, sim.seed, sim.n);
  simulate->add_option("--records", sim.records_path, "write records CSV ('-' for stdout)");
  simulate->add_option("--report", sim.report_path, "write JSON report ('-' for stdout)");
  simulate->add_option("--device-stream", sim.device_path,
                       "write the campaign as a device line-protocol capture");

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "one campaign per camera frame rate in f_cam_list");
  add_campaign_options(sweep, sw.config, sw.overrides, sw.seed, sw.n);
  sweep->add_option("--table", sw.table_path, "write per-rate CSV table ('-' for stdout)");
  sweep->add_option("-j,--jobs", sw.jobs, "campaigns to run concurrently")->check(CLI::PositiveNumber);

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "statistics of a records CSV");
  analyze->add_option("records", an.records_path, "records CSV ('-' for stdin)")->required();
  analyze->add_option("-c,--config", an.config, "config whose pipeline provides the model");
  analyze->add_option("--set", an.overrides, "override a config key (key=value)");
  analyze->add_option("--f-cam", an.f_cam, "camera rate in Hz for a min-anchored model fit");
  analyze->add_option("--f-dis", an.f_dis, "display rate in Hz for a min-anchored model fit");
  analyze->add_option("--report", an.report_path, "JSON report destination (default stdout)");
  analyze->add_flag("--text", an.text, "print the human-readable summary instead of JSON");

  IngestArgs ing;
  auto* ingest = app.add_subcommand("ingest", "turn a device capture into records");
  ingest->add_option("input", ing.input, "device capture file ('-' for stdin)");
  ingest->add_option("-k,--max-filter-len", ing.detector.max_filter_len_k, "maximum filter length k");
  ingest->add_option("--slope-threshold", ing.detector.slope_threshold);
  ingest->add_option("--slope-window", ing.detector.slope_window);
  ingest->add_option("--single-step-threshold", ing.detector.single_step_threshold);
  ingest->add_option("--records", ing.records_path, "records CSV destination (default stdout)");
  ingest->add_option("--report", ing.report_path, "also write a JSON report");

  ModelArgs mo;
  auto* model = app.add_subcommand("model", "analytic delay distribution");
  model->add_option("--f-cam", mo.f_cam, "camera frame rate, Hz")->capture_default_str();
  model->add_option("--f-dis", mo.f_dis, "display refresh rate, Hz")->capture_default_str();
  model->add_option("--t-proc", mo.t_proc_ms, "processing delay, ms")->capture_default_str();
  model->add_option("--t-min", mo.t_min_ms, "minimum camera lead time, ms")->capture_default_str();
  model->add_option("--pdf", mo.pdf_path, "write a 1000-point pdf/cdf table CSV");
  model->add_flag("--json", mo.json, "print JSON instead of text");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kBadInput;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim, in, out);
    if (sweep->parsed()) return cmd_sweep(sw, in, out);
    if (analyze->parsed()) return cmd_analyze(an, in, out);
    if (ingest->parsed()) return cmd_ingest(ing, in, out);
    if (model->parsed()) return cmd_model(mo, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kBadInput;
  }
  return kBadInput;
}

}  // namespace g2g::cli
