#include "bsg/experiments.hpp"

#include <atomic>
#include <bit>
#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "bsg/ilp.hpp"
#include "bsg/rng.hpp"

namespace bsg {

Society impartial_culture(int m, Weight n, std::uint64_t seed) {
  const auto orders = enumerate_orders(m);
  Society society(orders.size(), 0);
  std::mt19937_64 gen(seed);
  for (Weight v = 0; v < n; ++v)
    ++society[uniform_below(gen, orders.size())];
  return society;
}

namespace {

// Candidate indexing for the gadget: d=0, e=1, p=2, c=3, then a_i, b_i
// interleaved.
constexpr int kD = 0, kE = 1, kP = 2, kC = 3;

PreferenceOrder signature_order(int x, int y, int z, int nv,
                                const std::vector<bool>& swapped) {
  std::vector<int> r = {x, y, z};
  for (int i = 0; i < nv; ++i) {
    const int a = 4 + 2 * i, b = 5 + 2 * i;
    r.push_back(swapped[i] ? b : a);
    r.push_back(swapped[i] ? a : b);
  }
  r.push_back(kC);
  return PreferenceOrder(std::move(r));
}

PreferenceOrder top_then_rest(std::vector<int> head, int nv) {
  for (int i = 0; i < nv; ++i) {
    head.push_back(4 + 2 * i);
    head.push_back(5 + 2 * i);
  }
  return PreferenceOrder(std::move(head));
}

}  // namespace

std::pair<SocietyGraph, int> vc_gadget(const SimpleGraph& g, int k) {
  std::vector<int> degree(g.n, 0);
  for (auto [u, v] : g.edges) {
    if (u < 0 || u >= g.n || v < 0 || v >= g.n || u == v)
      throw ReferenceError("bad edge in gadget input");
    ++degree[u];
    ++degree[v];
  }
  for (int d : degree)
    if (d > 3) throw PreconditionError("gadget input must have max degree 3");

  const Weight X = 10, Y = 100, Z = 1000;
  const Weight nv = g.n, ne = static_cast<Weight>(g.edges.size());
  const Weight second_part = nv * (X + Y + Z) + ne * (2 * X + 9);
  const Weight T = second_part * second_part;

  std::vector<VoterType> types;
  Society weights;
  auto add_node = [&](PreferenceOrder order, Weight w) {
    types.push_back({static_cast<int>(types.size()), std::move(order), {}});
    weights.push_back(w);
    return types.back().id;
  };

  add_node(top_then_rest({kC, kD, kE, kP}, g.n), T);
  add_node(top_then_rest({kP, kC, kD, kE}, g.n), T - (2 * X + 9) * ne);
  add_node(top_then_rest({kD, kC, kE, kP}, g.n), T - (Y + Z) * nv - k * X);

  std::vector<Arc> arcs;
  std::vector<int> v1(g.n);
  for (int i = 0; i < g.n; ++i) {
    std::vector<bool> sig(g.n, false);
    sig[i] = true;
    const int n3 = add_node(signature_order(kD, kP, kE, g.n, sig), Z);
    const int n2 = add_node(signature_order(kD, kE, kP, g.n, sig), Y);
    v1[i] = add_node(signature_order(kE, kD, kP, g.n, sig), X);
    arcs.push_back({n3, n2});
    arcs.push_back({n2, v1[i]});
  }
  for (auto [u, v] : g.edges) {
    std::vector<bool> sig(g.n, false);
    sig[u] = sig[v] = true;
    const int e1 = add_node(signature_order(kE, kD, kP, g.n, sig), 1);
    const int e2 = add_node(signature_order(kE, kP, kD, g.n, sig), X + 3);
    const int e3 = add_node(signature_order(kP, kE, kD, g.n, sig), X + 5);
    arcs.push_back({e1, e2});
    arcs.push_back({e2, e3});
    arcs.push_back({e1, v1[u]});
    arcs.push_back({e1, v1[v]});
  }

  AdjacencyPolicy policy;
  policy.swap1 = false;
  policy.explicit_arcs = std::move(arcs);
  return {build_society_graph(types, weights, policy), kP};
}

bool has_vertex_cover(const SimpleGraph& g, int k) {
  if (g.n > 20) throw SizeLimitError("vertex cover check limited to 20 nodes");
  for (std::uint32_t mask = 0; mask < (1u << g.n); ++mask) {
    if (std::popcount(mask) > k) continue;
    bool covers = true;
    for (auto [u, v] : g.edges)
      if (!((mask >> u) & 1) && !((mask >> v) & 1)) {
        covers = false;
        break;
      }
    if (covers) return true;
  }
  return false;
}

ExperimentConfig experiment_config_from_json(const Json& j) {
  ExperimentConfig c;
  c.m = j.value("m", c.m);
  c.n = j.value("n", c.n);
  c.count = j.value("count", c.count);
  if (j.contains("rule")) c.rule = rule_from_json(j.at("rule"));
  c.seed = j.value("seed", c.seed);
  if (j.contains("methods"))
    c.methods = j.at("methods").get<std::vector<std::string>>();
  if (j.contains("p")) c.preferred = j.at("p").get<int>();
  c.oracle_n_limit = j.value("oracle_n_limit", c.oracle_n_limit);
  if (j.contains("sa")) {
    const Json& sa = j.at("sa");
    c.sa.iterations = sa.value("iterations", c.sa.iterations);
    c.sa.p0 = sa.value("p0", c.sa.p0);
    c.sa.seed = sa.value("seed", c.sa.seed);
  }
  if (j.contains("budget_cap")) c.budget_cap = j.at("budget_cap").get<Weight>();
  for (const std::string& m : c.methods)
    if (m != "ilp" && m != "greedy" && m != "sa" && m != "oracle")
      throw ParseError("unknown method: " + m);
  return c;
}

namespace {

std::uint64_t instance_seed(const ExperimentConfig& config, int index) {
  return Fnv1a{}.word(config.seed).word(static_cast<std::uint64_t>(index)).digest();
}

std::string hex_digest(const std::vector<Weight>& entries) {
  Fnv1a h;
  for (Weight e : entries) h.word(static_cast<std::uint64_t>(e));
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h.digest();
  return out.str();
}

int lowest_scoring(const VotingRule& rule, const SocietyGraph& g) {
  const VotingRule tally = rule.is_scoring() ? rule : VotingRule::plurality();
  const auto sc = scores(tally, g.types, g.society);
  int worst = 0;
  for (int c = 1; c < static_cast<int>(sc.size()); ++c)
    if (sc[c] < sc[worst]) worst = c;
  return worst;
}

int thread_cap() {
  int cap = static_cast<int>(std::thread::hardware_concurrency());
  if (cap < 1) cap = 1;
  if (const char* env = std::getenv("SOCIETY_BSG_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) cap = std::min(cap, v);
  }
  return cap;
}

ExperimentRecord run_method(const ExperimentConfig& config,
                            const BsgInstance& inst,
                            const std::string& method) {
  ExperimentRecord rec;
  rec.method = method;
  const auto start = std::chrono::steady_clock::now();
  try {
    if (method == "ilp") {
      const BsgModel model = build_sync_bsg_model(inst);
      const SolveResult res = solve(model.ilp);
      if (res.status == SolveResult::Status::Optimal) {
        rec.cost = res.objective;
        rec.success = "true";
        rec.plan_digest = hex_digest(model.decode_plan(res.assignment).beta);
      } else {
        rec.success = "false";
      }
    } else if (method == "greedy" || method == "sa") {
      const Decider decide =
          method == "greedy" ? greedy_decider() : sa_decider(config.sa);
      const BudgetSearchResult res =
          budget_search(decide, inst, config.budget_cap);
      rec.cost = res.budget;
      rec.success = "true";
      rec.plan_digest = hex_digest(res.plan.a);
    } else {  // oracle
      if (inst.graph.num_candidates() > 3 ||
          total_weight(inst.graph.society) > config.oracle_n_limit) {
        rec.success = "skipped";
      } else {
        const OracleResult res = brute_force_optimal(inst);
        if (res.status == OracleResult::Status::Found) {
          rec.cost = res.cost;
          rec.success = "true";
          rec.plan_digest = hex_digest(res.plan.a);
        } else {
          rec.success = "false";
        }
      }
    }
  } catch (const Error&) {
    rec.success = "false";
  }
  rec.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  return rec;
}

void write_row(const ExperimentRecord& r, std::ostream& out) {
  out << r.instance_id << "," << r.seed << "," << r.method << "," << r.cost
      << "," << r.success << "," << std::fixed << std::setprecision(3)
      << r.wall_ms << "," << r.plan_digest << "\n";
}

}  // namespace

BsgInstance make_ic_instance(const ExperimentConfig& config, int index) {
  BsgInstance inst;
  inst.graph = make_canonical_graph(
      config.m, impartial_culture(config.m, config.n,
                                  instance_seed(config, index)));
  inst.rule = config.rule;
  inst.preferred =
      config.preferred.value_or(lowest_scoring(config.rule, inst.graph));
  inst.cost = shift_cost_matrix(inst.graph.types, inst.preferred);
  inst.mode = DiffusionMode::Sync;
  return inst;
}

std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& config,
                                             std::ostream& csv) {
  csv << "instance,seed,method,cost,success,wall_ms,plan_digest\n";
  std::vector<std::vector<ExperimentRecord>> per_instance(config.count);
  std::vector<bool> done(config.count, false);
  std::mutex mu;
  std::condition_variable cv;
  std::atomic<int> next{0};

  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= config.count) return;
      const BsgInstance inst = make_ic_instance(config, i);
      std::vector<ExperimentRecord> recs;
      for (const std::string& method : config.methods) {
        ExperimentRecord rec = run_method(config, inst, method);
        rec.instance_id = "m" + std::to_string(config.m) + "-n" +
                          std::to_string(config.n) + "-i" + std::to_string(i);
        rec.seed = instance_seed(config, i);
        recs.push_back(std::move(rec));
      }
      std::lock_guard<std::mutex> lock(mu);
      per_instance[i] = std::move(recs);
      done[i] = true;
      cv.notify_all();
    }
  };

  const int workers = std::min(thread_cap(), std::max(config.count, 1));
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);

  std::vector<ExperimentRecord> all;
  for (int i = 0; i < config.count; ++i) {
    std::unique_lock<std::mutex> lock(mu);
    cv.wait(lock, [&] { return done[i]; });
    for (const ExperimentRecord& r : per_instance[i]) {
      write_row(r, csv);
      all.push_back(r);
    }
    csv.flush();
  }
  for (auto& t : pool) t.join();
  return all;
}

void write_csv(const std::vector<ExperimentRecord>& records,
               std::ostream& out) {
  out << "instance,seed,method,cost,success,wall_ms,plan_digest\n";
  for (const ExperimentRecord& r : records) write_row(r, out);
}

std::vector<ExperimentRecord> read_csv(std::istream& in) {
  std::vector<ExperimentRecord> records;
  std::string line;
  if (!std::getline(in, line) ||
      line != "instance,seed,method,cost,success,wall_ms,plan_digest")
    throw ParseError("bad CSV header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) fields.push_back(f);
    if (fields.size() < 6) throw ParseError("short CSV row: " + line);
    ExperimentRecord r;
    r.instance_id = fields[0];
    try {
      r.seed = std::stoull(fields[1]);
      r.method = fields[2];
      r.cost = std::stoll(fields[3]);
      r.success = fields[4];
      r.wall_ms = std::stod(fields[5]);
    } catch (const std::exception&) {
      throw ParseError("bad CSV row: " + line);
    }
    if (fields.size() > 6) r.plan_digest = fields[6];
    records.push_back(std::move(r));
  }
  return records;
}

namespace {

double metric_value(const ExperimentRecord& r, const std::string& metric,
                    int instance_index) {
  if (metric == "cost") return static_cast<double>(r.cost);
  if (metric == "wall_ms") return r.wall_ms;
  if (metric == "instance") return instance_index;
  throw ParseError("unknown plot metric: " + metric);
}

}  // namespace

void plot_scatter(const std::vector<ExperimentRecord>& records,
                  const std::string& x_metric, const std::string& y_metric,
                  std::ostream& out) {
  std::vector<const ExperimentRecord*> pts;
  std::vector<std::string> instance_ids, methods;
  auto index_of = [](std::vector<std::string>& v, const std::string& s) {
    for (size_t i = 0; i < v.size(); ++i)
      if (v[i] == s) return static_cast<int>(i);
    v.push_back(s);
    return static_cast<int>(v.size()) - 1;
  };
  for (const ExperimentRecord& r : records)
    if (r.success != "skipped") {
      pts.push_back(&r);
      index_of(instance_ids, r.instance_id);
      index_of(methods, r.method);
    }
  if (pts.empty()) throw SpecError("nothing to plot: no usable records");

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  std::vector<std::pair<double, double>> coords;
  for (const ExperimentRecord* r : pts) {
    const int idx = index_of(instance_ids, r->instance_id);
    const double x = metric_value(*r, x_metric, idx);
    const double y = metric_value(*r, y_metric, idx);
    coords.emplace_back(x, y);
    xmin = std::min(xmin, x); xmax = std::max(xmax, x);
    ymin = std::min(ymin, y); ymax = std::max(ymax, y);
  }
  const double xpad = (xmax - xmin) * 0.05 + 1e-9;
  const double ypad = (ymax - ymin) * 0.05 + 1e-9;
  xmin -= xpad; xmax += xpad; ymin -= ypad; ymax += ypad;

  const double left = 70, right = 610, top = 40, bottom = 440;
  auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * (right - left); };
  auto sy = [&](double y) { return bottom - (y - ymin) / (ymax - ymin) * (bottom - top); };
  auto label = [](const std::string& metric) {
    return metric == "wall_ms" ? "wall_ms (ms)" : metric;
  };
  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                   "#9467bd", "#ff7f0e", "#8c564b"};

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
         "height=\"480\" viewBox=\"0 0 640 480\">\n"
      << "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n"
      << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right
      << "\" y2=\"" << bottom << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << left
      << "\" y2=\"" << top << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << (left + right) / 2 << "\" y=\"470\" "
         "text-anchor=\"middle\" font-size=\"14\">" << label(x_metric)
      << "</text>\n"
      << "<text x=\"16\" y=\"" << (top + bottom) / 2
      << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 16 "
      << (top + bottom) / 2 << ")\">" << label(y_metric) << "</text>\n";
  out << "<text x=\"" << left << "\" y=\"458\" font-size=\"11\">" << xmin
      << "</text>\n<text x=\"" << right << "\" y=\"458\" text-anchor=\"end\" "
         "font-size=\"11\">" << xmax << "</text>\n"
      << "<text x=\"" << left - 6 << "\" y=\"" << bottom
      << "\" text-anchor=\"end\" font-size=\"11\">" << ymin << "</text>\n"
      << "<text x=\"" << left - 6 << "\" y=\"" << top + 4
      << "\" text-anchor=\"end\" font-size=\"11\">" << ymax << "</text>\n";
  for (size_t i = 0; i < pts.size(); ++i) {
    const int mi = index_of(methods, pts[i]->method);
    out << "<circle cx=\"" << sx(coords[i].first) << "\" cy=\""
        << sy(coords[i].second) << "\" r=\"4\" fill=\""
        << kPalette[mi % 6] << "\" fill-opacity=\"0.7\"/>\n";
  }
  for (size_t mi = 0; mi < methods.size(); ++mi) {
    const double ly = top + 18.0 * mi;
    out << "<circle cx=\"" << right - 90 << "\" cy=\"" << ly
        << "\" r=\"4\" fill=\"" << kPalette[mi % 6] << "\"/>\n"
        << "<text x=\"" << right - 80 << "\" y=\"" << ly + 4
        << "\" font-size=\"12\">" << methods[mi] << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace bsg
