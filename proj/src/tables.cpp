#include "acoint/tables.hpp"

#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "acoint/rng.hpp"

namespace acoint {

namespace {

constexpr Penalty kIcPenalties[] = {Penalty::HQC, Penalty::BIC};

std::vector<MethodSpec> joint_methods() {
  std::vector<MethodSpec> m;
  for (bool adaptive : {true, false})
    for (Penalty pen : kIcPenalties) m.push_back(joint_rank_method(pen, adaptive));
  for (bool adaptive : {true, false})
    for (Penalty pen : kIcPenalties) m.push_back(joint_lag_method(pen, adaptive));
  return m;
}

std::vector<MethodSpec> step1_methods() {
  std::vector<MethodSpec> m;
  for (bool adaptive : {true, false})
    for (Penalty pen : kIcPenalties) m.push_back(lag_method(pen, adaptive));
  return m;
}

std::vector<MethodSpec> step2_methods() {
  std::vector<MethodSpec> m;
  for (bool rank_adaptive : {false, true})
    for (Penalty rank_pen : kIcPenalties)
      for (bool lag_adaptive : {true, false})
        for (Penalty lag_pen : kIcPenalties)
          m.push_back(sequential_rank_method(rank_pen, rank_adaptive, lag_pen, lag_adaptive));
  return m;
}

std::vector<MethodSpec> bootstrap_methods() {
  std::vector<MethodSpec> m;
  for (LagChoice lag : {LagChoice::True, LagChoice::BIC, LagChoice::AlsBIC})
    for (BootstrapKind kind :
         {BootstrapKind::NonAdaptiveWild, BootstrapKind::VarianceBootstrap, BootstrapKind::WildBootstrap})
      m.push_back(bootstrap_rank_method(kind, lag));
  return m;
}

DgpSpec design(const TableConfig& cfg, Innovation inn, int r0, double gamma, int T, int id) {
  DgpSpec d = DgpSpec::for_rank(r0, gamma, inn, T);
  d.reps = cfg.reps;
  d.seed = stream_seed(cfg.seed, static_cast<std::uint64_t>(id),
                       static_cast<std::uint64_t>(static_cast<int>(inn) * 16 + r0),
                       static_cast<std::uint64_t>(gamma * 1000.0 + 0.5) * 100000ULL +
                           static_cast<std::uint64_t>(T));
  return d;
}

void run_grid(TableResult& out, const TableConfig& cfg, const std::string& section, Innovation inn,
              const std::vector<int>& ranks, const std::vector<MethodSpec>& methods) {
  for (int r0 : ranks)
    for (double g : cfg.gammas)
      for (int T : cfg.Ts) {
        TableBlock b;
        b.section = section;
        b.innovation = inn;
        b.r0 = r0;
        b.gamma = g;
        b.T = T;
        b.tables = run_experiment(design(cfg, inn, r0, g, T, out.id), methods, cfg.options);
        out.blocks.push_back(std::move(b));
      }
}

}  // namespace

std::string table_title(int id) {
  switch (id) {
    case 1: return "Joint selection of rank and lag (SV and single volatility break)";
    case 2: return "Sequential IC selection, lag (Step I) then rank (Step II), AR stochastic volatility";
    case 3: return "Sequential IC selection, lag (Step I) then rank (Step II), single volatility break";
    case 4: return "Sequential bootstrap rank tests, AR stochastic volatility";
    case 5: return "Sequential bootstrap rank tests, single volatility break";
    case 6: return "Joint selection of rank and lag, homoskedastic innovations";
  }
  throw Error(ErrorKind::InvalidArgument, "table id must be 1..6, got " + std::to_string(id));
}

TableResult replicate_table(int id, const TableConfig& cfg) {
  TableResult out;
  out.id = id;
  out.title = table_title(id);
  out.config = cfg;
  const std::vector<int> all_ranks{0, 1, 2};
  switch (id) {
    case 1:
      for (Innovation inn : {Innovation::StochasticVolatility, Innovation::SingleBreak})
        run_grid(out, cfg, "joint", inn, all_ranks, joint_methods());
      break;
    case 6:
      run_grid(out, cfg, "joint", Innovation::Homoskedastic, all_ranks, joint_methods());
      break;
    case 2:
    case 3: {
      const Innovation inn = id == 2 ? Innovation::StochasticVolatility : Innovation::SingleBreak;
      run_grid(out, cfg, "step1", inn, {1}, step1_methods());
      run_grid(out, cfg, "step2", inn, all_ranks, step2_methods());
      break;
    }
    case 4:
    case 5: {
      const Innovation inn = id == 4 ? Innovation::StochasticVolatility : Innovation::SingleBreak;
      run_grid(out, cfg, "bootstrap", inn, all_ranks, bootstrap_methods());
      run_grid(out, cfg, "lag", inn, {1}, {lag_method(Penalty::BIC, false), lag_method(Penalty::BIC, true)});
      break;
    }
    default:
      table_title(id);
  }
  return out;
}

void write_table_csv(std::ostream& out, const TableResult& t) {
  out << "table,section,innovation,r0,gamma,T,method,category,percent,mc_se,count,reps,failures\n";
  out << std::fixed;
  for (const TableBlock& b : t.blocks)
    for (const FrequencyTable& f : b.tables)
      for (std::size_t i = 0; i < f.categories.size(); ++i)
        out << t.id << ',' << b.section << ',' << to_string(b.innovation) << ',' << b.r0 << ','
            << std::setprecision(2) << b.gamma << ',' << b.T << ',' << f.method << ",\""
            << f.categories[i] << "\"," << std::setprecision(1) << f.percent(i) << ','
            << std::setprecision(2) << f.mc_se(i) << ',' << f.counts[i] << ',' << f.reps << ','
            << f.failures << '\n';
}

void write_table_text(std::ostream& out, const TableResult& t) {
  out << "TABLE " << t.id << ": " << t.title << "\n";
  const ExperimentOptions& o = t.config.options;
  out << "reps=" << t.config.reps << " seed=" << t.config.seed << " B=" << o.B << " eta=" << o.eta
      << " multiplier=" << to_string(o.multiplier) << " flavor=" << to_string(o.flavor)
      << " levels_intercept=" << o.levels_intercept << "\n";

  // Group blocks into panels keyed by (section, innovation, r0), keeping order.
  std::vector<std::string> order;
  std::map<std::string, std::vector<const TableBlock*>> panels;
  for (const TableBlock& b : t.blocks) {
    std::ostringstream key;
    key << b.section << " | " << to_string(b.innovation) << " | r0=" << b.r0;
    if (!panels.count(key.str())) order.push_back(key.str());
    panels[key.str()].push_back(&b);
  }

  for (const std::string& key : order) {
    const auto& rows = panels[key];
    out << "\n[" << key << "]\n";
    std::ostringstream head1, head2;
    head1 << std::setw(6) << "" << std::setw(6) << "";
    head2 << std::setw(6) << "gamma" << std::setw(6) << "T";
    for (const FrequencyTable& f : rows.front()->tables) {
      const int width = static_cast<int>(f.categories.size()) * 8;
      std::string name = f.method.substr(0, static_cast<std::size_t>(width - 2));
      head1 << " | " << std::setw(width) << std::left << name << std::right;
      head2 << " | ";
      for (const std::string& c : f.categories) head2 << std::setw(8) << c;
    }
    out << head1.str() << "\n" << head2.str() << "\n";
    for (const TableBlock* b : rows) {
      out << std::fixed << std::setprecision(1) << std::setw(6) << b->gamma << std::setw(6) << b->T;
      for (const FrequencyTable& f : b->tables) {
        out << " | ";
        for (std::size_t i = 0; i < f.categories.size(); ++i) out << std::setw(8) << f.percent(i);
      }
      out << "\n";
    }
  }
  out.unsetf(std::ios::floatfield);
}

}  // namespace acoint
