#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mchit/bounds.hpp"
#include "mchit/greedy.hpp"
#include "mchit/hitting.hpp"
#include "mchit/io.hpp"
#include "mchit/report.hpp"
#include "mchit/sim.hpp"

namespace py = pybind11;
using namespace mchit;

namespace {

py::object json_to_py(const nlohmann::json& doc) {
  py::module_ json = py::module_::import("json");
  return json.attr("loads")(doc.dump());
}

}  // namespace

PYBIND11_MODULE(_mchit, m) {
  m.doc() =
      "Exact hitting-time distributions, strong stationary times and "
      "geometric-sum approximation bounds for finite ergodic Markov chains";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      if (e.is_parse() || e.is_validation())
        PyErr_SetString(PyExc_ValueError, e.what());
      else
        PyErr_SetString(PyExc_RuntimeError, e.what());
    }
  });

  py::class_<MarkovChain>(m, "MarkovChain")
      .def(py::init<Mat, std::vector<std::string>>(), py::arg("transition"),
           py::arg("states") = std::vector<std::string>{})
      .def_property_readonly("size", &MarkovChain::size)
      .def_property_readonly("transition", &MarkovChain::transition)
      .def_property_readonly("pi", &MarkovChain::pi)
      .def_property_readonly("states", &MarkovChain::states)
      .def("index_of", &MarkovChain::index_of);

  m.def("validate_chain", &validate_chain, py::arg("transition"),
        py::arg("states") = std::vector<std::string>{});
  m.def("stationary", &stationary);
  m.def("step_distribution", &step_distribution, py::arg("chain"),
        py::arg("init"), py::arg("t"));
  m.def("restricted_stationary", &restricted_stationary);
  m.def("is_reversible", &is_reversible, py::arg("chain"),
        py::arg("tol") = 1e-12);
  m.def("point_mass", &point_mass);

  py::class_<IntDist>(m, "IntDist")
      .def(py::init<std::vector<double>, double>(), py::arg("pmf"),
           py::arg("tail_bound"))
      .def_property_readonly("n_max", &IntDist::n_max)
      .def_property_readonly("tail_bound", &IntDist::tail_bound)
      .def_property_readonly("probs", &IntDist::probs)
      .def("pmf", &IntDist::pmf)
      .def("survival", &IntDist::survival)
      .def("mean", &IntDist::mean)
      .def("total_mass", &IntDist::total_mass)
      .def("mgf", [](const IntDist& d, double theta) {
        auto v = d.mgf(theta);
        return py::make_tuple(v.value, v.divergent);
      });

  m.def("geometric", &geometric, py::arg("p"), py::arg("n_max"));
  m.def("tv_distance", [](const IntDist& a, const IntDist& b) {
    TvResult r = tv_distance(a, b);
    return py::make_tuple(r.value, r.error_bound);
  });
  m.def("geometric_compound", &geometric_compound, py::arg("p"),
        py::arg("f_t"), py::arg("eps_tail") = kDefaultTailEps);

  py::class_<DominanceWitness>(m, "DominanceWitness")
      .def_readonly("holds", &DominanceWitness::holds)
      .def_readonly("worst_t", &DominanceWitness::worst_t)
      .def_readonly("worst_gap", &DominanceWitness::worst_gap);
  m.def("check_stochastic_dominance", &check_stochastic_dominance,
        py::arg("upper"), py::arg("lower"), py::arg("tol") = kDominanceTol);

  py::enum_<SstProvenance>(m, "SstProvenance")
      .value("SeparationFastest", SstProvenance::SeparationFastest)
      .value("ReturnProbability", SstProvenance::ReturnProbability)
      .value("GreedyDual", SstProvenance::GreedyDual);

  py::class_<SstResult>(m, "SstResult")
      .def_readonly("dist", &SstResult::dist)
      .def_readonly("provenance", &SstResult::provenance)
      .def_readonly("init_desc", &SstResult::init_desc)
      .def_readonly("sequence_valid", &SstResult::sequence_valid)
      .def_readonly("diagnostic", &SstResult::diagnostic);

  m.def("separation", &separation, py::arg("chain"), py::arg("init"),
        py::arg("t"));
  m.def("fastest_sst", &fastest_sst, py::arg("chain"), py::arg("init"),
        py::arg("eps_tail") = kDefaultTailEps,
        py::arg("init_desc") = "custom");
  m.def("sst_from_return_probs", &sst_from_return_probs, py::arg("chain"),
        py::arg("j"), py::arg("eps_tail") = kDefaultTailEps,
        py::arg("force") = false);

  py::class_<ConditionReport>(m, "ConditionReport")
      .def_readonly("holds", &ConditionReport::holds)
      .def_readonly("horizon", &ConditionReport::horizon)
      .def_readonly("horizon_capped", &ConditionReport::horizon_capped)
      .def_readonly("first_t", &ConditionReport::first_t)
      .def_readonly("first_y", &ConditionReport::first_y)
      .def_readonly("worst_violation", &ConditionReport::worst_violation);
  m.def("check_lemma_condition", &check_lemma_condition, py::arg("chain"),
        py::arg("j"), py::arg("horizon") = -1,
        py::arg("tol") = kConditionTol);

  py::class_<IdentityReport>(m, "IdentityReport")
      .def_readonly("holds", &IdentityReport::holds)
      .def_readonly("horizon", &IdentityReport::horizon)
      .def_readonly("horizon_capped", &IdentityReport::horizon_capped)
      .def_readonly("max_discrepancy", &IdentityReport::max_discrepancy)
      .def_readonly("worst_t", &IdentityReport::worst_t);
  m.def("check_no_hit_before_sst", &check_no_hit_before_sst,
        py::arg("chain"), py::arg("j"), py::arg("horizon") = -1,
        py::arg("tol") = kConditionTol);

  py::class_<HittingResult>(m, "HittingResult")
      .def_readonly("dist", &HittingResult::dist)
      .def_readonly("conditional_dist", &HittingResult::conditional_dist)
      .def_readonly("mean_direct", &HittingResult::mean_direct)
      .def_readonly("mean_kac", &HittingResult::mean_kac)
      .def_readonly("mean_kac_error", &HittingResult::mean_kac_error)
      .def_readonly("pi_j", &HittingResult::pi_j);
  m.def("hitting_time_dist", &hitting_time_dist, py::arg("chain"),
        py::arg("j"), py::arg("eps_tail") = kDefaultTailEps);
  m.def("expected_hitting_kac", &expected_hitting_kac, py::arg("chain"),
        py::arg("j"), py::arg("eps_tail") = kDefaultTailEps);
  m.def("average_hitting_time", &average_hitting_time, py::arg("chain"),
        py::arg("eps_tail") = kDefaultTailEps);

  py::class_<MgfCheck>(m, "MgfCheck")
      .def_readonly("theta", &MgfCheck::theta)
      .def_readonly("gate", &MgfCheck::gate)
      .def_readonly("bound", &MgfCheck::bound)
      .def_readonly("exact", &MgfCheck::exact)
      .def_readonly("certified", &MgfCheck::certified)
      .def_readonly("pass_", &MgfCheck::pass);

  py::class_<BoundsReport>(m, "BoundsReport")
      .def_readonly("j", &BoundsReport::j)
      .def_readonly("pi_j", &BoundsReport::pi_j)
      .def_readonly("sst_provenance", &BoundsReport::sst_provenance)
      .def_readonly("mean_T", &BoundsReport::mean_T)
      .def_readonly("mean_W", &BoundsReport::mean_W)
      .def_readonly("tv_bound", &BoundsReport::tv_bound)
      .def_readonly("tv_bound_error", &BoundsReport::tv_bound_error)
      .def_readonly("tv_exact", &BoundsReport::tv_exact)
      .def_readonly("tv_exact_error", &BoundsReport::tv_exact_error)
      .def_readonly("dominance", &BoundsReport::dominance)
      .def_readonly("mean_upper_1", &BoundsReport::mean_upper_1)
      .def_readonly("mean_upper_2", &BoundsReport::mean_upper_2)
      .def_readonly("mean_chain_full", &BoundsReport::mean_chain_full)
      .def_readonly("mgf_checks", &BoundsReport::mgf_checks)
      .def_readonly("sst_mean_lower", &BoundsReport::sst_mean_lower)
      .def_readonly("all_pass", &BoundsReport::all_pass)
      .def_readonly("failures", &BoundsReport::failures);

  m.def("tv_bound", &tv_bound, py::arg("chain"), py::arg("j"), py::arg("t"),
        py::arg("eps_tail") = kDefaultTailEps);
  m.def("tv_report", &tv_report, py::arg("chain"), py::arg("j"),
        py::arg("t"), py::arg("eps_tail") = kDefaultTailEps,
        py::arg("thetas") = std::vector<double>{});

  py::class_<MgfBound>(m, "MgfBound")
      .def_readonly("gate", &MgfBound::gate)
      .def_readonly("bound", &MgfBound::bound)
      .def_readonly("exact", &MgfBound::exact);
  m.def("mgf_bound", &mgf_bound, py::arg("chain"), py::arg("j"),
        py::arg("t"), py::arg("theta"),
        py::arg("eps_tail") = kDefaultTailEps);
  m.def("sst_mean_lower_bound", &sst_mean_lower_bound);

  py::class_<WorstCaseSst>(m, "WorstCaseSst")
      .def_readonly("sst_means", &WorstCaseSst::sst_means)
      .def_readonly("t_star", &WorstCaseSst::t_star)
      .def_readonly("argmax_state", &WorstCaseSst::argmax_state)
      .def_readonly("avg_hitting", &WorstCaseSst::avg_hitting)
      .def_readonly("avg_hitting_bound", &WorstCaseSst::avg_hitting_bound)
      .def_readonly("bound_holds", &WorstCaseSst::bound_holds)
      .def_readonly("ergodic_avg_bound", &WorstCaseSst::ergodic_avg_bound);
  m.def("worst_case_sst", &worst_case_sst, py::arg("chain"),
        py::arg("eps_tail") = kDefaultTailEps,
        py::arg("n") = std::optional<long>{});
  m.def("ergodic_average_tv", &ergodic_average_tv, py::arg("chain"),
        py::arg("l"), py::arg("n"));

  py::class_<WorstStateCheck>(m, "WorstStateCheck")
      .def_readonly("applicable", &WorstStateCheck::applicable)
      .def_readonly("m", &WorstStateCheck::m)
      .def_readonly("conclusion_holds", &WorstStateCheck::conclusion_holds)
      .def_readonly("horizon", &WorstStateCheck::horizon);
  m.def("check_worst_state_proposition", &check_worst_state_proposition,
        py::arg("chain"), py::arg("horizon") = 200,
        py::arg("tol") = kConditionTol);

  py::enum_<GreedyRegime>(m, "GreedyRegime")
      .value("UniqueMinAtJ", GreedyRegime::UniqueMinAtJ)
      .value("MinElsewhere", GreedyRegime::MinElsewhere)
      .value("Degenerate", GreedyRegime::Degenerate);

  py::class_<GreedyDual>(m, "GreedyDual")
      .def_readonly("j", &GreedyDual::j)
      .def_readonly("coeffs", &GreedyDual::coeffs)
      .def_readonly("sets", &GreedyDual::sets)
      .def_readonly("masses", &GreedyDual::masses)
      .def_readonly("p_absorb", &GreedyDual::p_absorb)
      .def_readonly("p_stay", &GreedyDual::p_stay)
      .def_readonly("p_other", &GreedyDual::p_other);

  py::class_<GreedyClass>(m, "GreedyClass")
      .def_readonly("regime", &GreedyClass::regime)
      .def_readonly("alpha", &GreedyClass::alpha)
      .def_readonly("beta", &GreedyClass::beta)
      .def_readonly("gamma", &GreedyClass::gamma);

  m.def("greedy_dual_row", &greedy_dual_row);
  m.def("dual_sst_dist", &dual_sst_dist, py::arg("gd"),
        py::arg("eps_tail") = kDefaultTailEps);
  m.def("dual_sst_mean", &dual_sst_mean);
  m.def("classify_greedy_case", &classify_greedy_case);

  py::class_<SplitMix64>(m, "SplitMix64")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("next", &SplitMix64::next)
      .def("uniform", &SplitMix64::uniform)
      .def("jump", &SplitMix64::jump);
  m.def("replica_stream", &replica_stream);

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init([](std::uint64_t seed, int replicas, long samples) {
             return SimConfig{seed, replicas, samples};
           }),
           py::arg("seed") = 0, py::arg("replicas") = 1,
           py::arg("samples_per_replica") = 1)
      .def_readwrite("seed", &SimConfig::seed)
      .def_readwrite("replicas", &SimConfig::replicas)
      .def_readwrite("samples_per_replica", &SimConfig::samples_per_replica);

  m.def("sample_hitting_time", &sample_hitting_time, py::arg("chain"),
        py::arg("j"), py::arg("init"), py::arg("rng"));
  m.def("sample_dual_sst", &sample_dual_sst, py::arg("gd"), py::arg("rng"));
  m.def("empirical_tv", &empirical_tv, py::arg("samples"), py::arg("exact"));
  m.def("run_hitting_sim", &run_hitting_sim, py::arg("chain"), py::arg("j"),
        py::arg("init"), py::arg("config"));
  m.def("run_dual_sst_sim", &run_dual_sst_sim, py::arg("gd"),
        py::arg("config"));

  m.def("two_state_chain", &io::two_state_chain, py::arg("delta"));
  m.def("iid_chain", &io::iid_chain, py::arg("pi"));
  m.def("birth_death_chain", &io::birth_death_chain, py::arg("size"),
        py::arg("up") = 0.3, py::arg("down") = 0.4);
  m.def("random_ergodic_chain", &io::random_ergodic_chain, py::arg("size"),
        py::arg("rng"));
  m.def("load_chain_json", [](const std::string& path) {
    io::ChainFile cf = io::load_chain_json(path);
    return MarkovChain(cf.transition, cf.states);
  });
  m.def("load_chain_csv", [](const std::string& path) {
    io::ChainFile cf = io::load_chain_csv(path);
    return MarkovChain(cf.transition, cf.states);
  });
  m.def("match_two_state_delta", &io::match_two_state_delta);

  m.def(
      "analyze",
      [](const MarkovChain& chain, int j, double eps_tail, long horizon,
         double tol, std::vector<double> thetas) {
        report::AnalyzeOptions opts;
        opts.eps_tail = eps_tail;
        opts.horizon = horizon;
        opts.tol = tol;
        opts.thetas = std::move(thetas);
        report::AnalyzeResult r = report::analyze(chain, j, opts);
        return json_to_py(report::to_json(r, chain));
      },
      py::arg("chain"), py::arg("j"), py::arg("eps_tail") = kDefaultTailEps,
      py::arg("horizon") = -1, py::arg("tol") = kConditionTol,
      py::arg("thetas") = std::vector<double>{},
      "Full per-state report as a dict (same schema as the CLI json)");

  m.def(
      "sweep",
      [](int count, int size, std::uint64_t seed, double eps_tail,
         bool include_greedy) {
        report::SweepOptions opts;
        opts.count = count;
        opts.size = size;
        opts.seed = seed;
        opts.eps_tail = eps_tail;
        opts.include_greedy = include_greedy;
        return json_to_py(report::to_json(report::sweep(opts)));
      },
      py::arg("count") = 1, py::arg("size") = 4, py::arg("seed") = 0,
      py::arg("eps_tail") = kDefaultTailEps,
      py::arg("include_greedy") = false);
}
