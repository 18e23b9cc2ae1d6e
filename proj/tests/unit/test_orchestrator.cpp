#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include <fmt/format.h>
#include <json.hpp>

#include "chainplace/orchestrator.hpp"
#include "support/builders.hpp"

using namespace chainplace;
using namespace tb;

namespace {

OrchestratorState fresh_state(OrchestratorMode mode, SubstrateGraph base) {
    OrchestratorState st;
    st.base = std::move(base);
    st.mode = mode;
    return st;
}

const SubstrateLink& find_link(const SubstrateGraph& g, const std::string& u,
                               const std::string& v) {
    for (const auto& l : g.links)
        if ((l.a == u && l.b == v) || (l.a == v && l.b == u)) return l;
    throw std::logic_error("no such link in fixture");
}

std::vector<EventKind> kinds(const OrchestratorState& st) {
    std::vector<EventKind> out;
    for (const auto& e : st.events) out.push_back(e.kind);
    return out;
}

SubstrateGraph two_hosts() {
    SubstrateGraph g;
    g.resource_kinds = {"cpu"};
    g.nodes = {host("P", {200}), host("Q", {200})};
    g.links = {link("P", "Q", 100, 1)};
    return g;
}

}  // namespace

TEST_CASE("reference sequence in INCREMENTAL mode reproduces the residual walkthrough") {
    const auto base = load_instance(source_dir() + "/data/sample_substrate.json").graph;
    const auto seq = load_request_sequence(source_dir() + "/data/sample_sequence.json");
    REQUIRE(seq.size() == 2);
    auto st = fresh_state(OrchestratorMode::Incremental, base);

    const auto& first = submit(st, seq[0].request, seq[0].at);
    CHECK(first.kind == EventKind::Placed);
    CHECK(first.detail == "objective 3");
    const auto after_s1 = current_residual(st);
    CHECK(after_s1.find_node("F")->capacity == ResourceVector{140, 140, 140});
    CHECK(after_s1.find_node("G")->capacity == ResourceVector{160, 160, 160});
    CHECK(after_s1.find_node("H")->capacity == ResourceVector{180, 180, 180});
    CHECK(find_link(after_s1, "F", "G").bandwidth_capacity == 90);
    CHECK(find_link(after_s1, "G", "H").bandwidth_capacity == 90);

    const auto& second = submit(st, seq[1].request, seq[1].at);
    CHECK(second.kind == EventKind::Placed);
    CHECK(st.consolidated.objective == 4);
    CHECK(st.consolidated.assignment.at({"s2", "monitoring", "r"}) == "F");
    const auto after_s2 = current_residual(st);
    CHECK(after_s2.find_node("F")->capacity == ResourceVector{90, 90, 90});
    CHECK(after_s2.find_node("D")->capacity == ResourceVector{150, 150, 150});
    CHECK(find_link(after_s2, "D", "F").bandwidth_capacity == 100);

    CHECK(kinds(st) == std::vector<EventKind>{EventKind::RequestAccepted, EventKind::Placed,
                                              EventKind::RequestAccepted, EventKind::Placed});
    CHECK(st.events[1].at == 0.0);
    CHECK(st.events[3].at == 1.0);
}

TEST_CASE("FULL_REOPT on the same sequence reaches the same four nodes") {
    const auto base = load_instance(source_dir() + "/data/sample_substrate.json").graph;
    const auto seq = load_request_sequence(source_dir() + "/data/sample_sequence.json");
    auto st = fresh_state(OrchestratorMode::FullReopt, base);
    for (const auto& t : seq) submit(st, t.request, t.at);
    CHECK(st.consolidated.objective == 4);
    CHECK(st.consolidated.active_nodes == std::set<std::string>{"D", "F", "G", "H"});
    CHECK_NOTHROW(current_residual(st));
}

TEST_CASE("first request lands as the consolidated solution") {
    const auto base = two_hosts();
    auto req = slice("s", {sfc("c", {nf("f", {50})}, 10, 1)});
    for (const auto mode : {OrchestratorMode::FullReopt, OrchestratorMode::Incremental}) {
        auto st = fresh_state(mode, base);
        const auto& e = submit(st, req);
        CHECK(e.kind == EventKind::Placed);
        CHECK(solution_to_json_text(st.consolidated) ==
              solution_to_json_text(solve_exact(base, {req})));
    }
}

TEST_CASE("an oversized request is rejected and the state stays put") {
    const auto base = two_hosts();
    for (const auto mode : {OrchestratorMode::FullReopt, OrchestratorMode::Incremental}) {
        auto st = fresh_state(mode, base);
        submit(st, slice("ok", {sfc("c", {nf("f", {50})}, 10, 1)}));
        const auto snapshot = solution_to_json_text(st.consolidated);

        const auto& e = submit(st, slice("big", {sfc("c", {nf("g", {500})}, 10, 1)}));
        CHECK(e.kind == EventKind::RejectedInfeasible);
        CHECK(e.detail == "capacity: NF big/c/g fits no authorized node");
        CHECK(st.active.count("big") == 0);
        CHECK(solution_to_json_text(st.consolidated) == snapshot);
    }
}

TEST_CASE("stale revisions are refused without touching anything") {
    auto st = fresh_state(OrchestratorMode::FullReopt, two_hosts());
    auto req = slice("s", {sfc("c", {nf("f", {50})}, 10, 1)});
    submit(st, req);
    const auto snapshot = solution_to_json_text(st.consolidated);
    const auto log_size = st.events.size();

    CHECK_THROWS_WITH_AS(submit(st, req), doctest::Contains("StaleRevision"), Error);
    auto older = req;
    older.revision = 0;
    CHECK_THROWS_WITH_AS(submit(st, older), doctest::Contains("StaleRevision"), Error);
    CHECK(st.events.size() == log_size);
    CHECK(solution_to_json_text(st.consolidated) == snapshot);
}

TEST_CASE("updates release the previous revision's consumption") {
    for (const auto mode : {OrchestratorMode::FullReopt, OrchestratorMode::Incremental}) {
        CAPTURE(to_string(mode));
        auto st = fresh_state(mode, two_hosts());
        auto rev1 = slice("s", {sfc("c", {nf("f", {50}, PlacementConstraint::explicit_set({"P"}))},
                                   10, 1)});
        submit(st, rev1);
        CHECK(current_residual(st).find_node("P")->capacity == ResourceVector{150});

        auto rev2 = slice("s", {sfc("c", {nf("f", {70}, PlacementConstraint::explicit_set({"P"}))},
                                   10, 1)},
                          2);
        const auto& e = submit(st, rev2);
        CHECK(e.kind == EventKind::Replanned);
        CHECK(current_residual(st).find_node("P")->capacity == ResourceVector{130});
        CHECK(st.active.at("s").revision == 2);

        // A hopeless third revision is rejected and revision 2 stays placed.
        auto rev3 = slice("s", {sfc("c", {nf("f", {500}, PlacementConstraint::explicit_set({"P"}))},
                                   10, 1)},
                          3);
        CHECK(submit(st, rev3).kind == EventKind::RejectedInfeasible);
        CHECK(current_residual(st).find_node("P")->capacity == ResourceVector{130});
        CHECK(st.active.at("s").revision == 2);
    }
}

TEST_CASE("FULL_REOPT migrates placed NFs where INCREMENTAL must reject") {
    SubstrateGraph g;
    g.resource_kinds = {"cpu"};
    g.nodes = {host("X", {100}), host("Y", {100})};
    g.links = {link("X", "Y", 100, 1)};
    auto first = slice("s1", {sfc("c", {nf("f1", {60}, PlacementConstraint::explicit_set({"X", "Y"}))},
                               10, 1)});
    auto second =
        slice("s2", {sfc("c", {nf("f2", {60}, PlacementConstraint::explicit_set({"X"}))}, 10, 1)});

    auto full = fresh_state(OrchestratorMode::FullReopt, g);
    submit(full, first);
    CHECK(full.consolidated.assignment.at({"s1", "c", "f1"}) == "X");  // lex choice
    CHECK(submit(full, second).kind == EventKind::Placed);
    CHECK(full.consolidated.assignment.at({"s1", "c", "f1"}) == "Y");  // migrated
    CHECK(full.consolidated.assignment.at({"s2", "c", "f2"}) == "X");

    auto incr = fresh_state(OrchestratorMode::Incremental, g);
    submit(incr, first);
    const auto& e = submit(incr, second);
    CHECK(e.kind == EventKind::RejectedInfeasible);
    CHECK(e.detail == "capacity: NF s2/c/f2 fits no authorized node");
}

TEST_CASE("INCREMENTAL pays for its greed when slices could share a node") {
    SubstrateGraph g;
    g.resource_kinds = {"cpu"};
    g.nodes = {host("X", {100}), host("Y", {100}), host("Z", {100})};
    g.links = {link("X", "Y", 100, 1), link("Y", "Z", 100, 1)};
    auto s1 = slice("s1", {sfc("c", {nf("f1", {30}, PlacementConstraint::explicit_set({"X", "Y"}))},
                            10, 1)});
    auto s2 = slice("s2", {sfc("c", {nf("f2", {30}, PlacementConstraint::explicit_set({"Y", "Z"}))},
                            10, 1)});

    auto incr = fresh_state(OrchestratorMode::Incremental, g);
    submit(incr, s1);
    submit(incr, s2);
    CHECK(incr.consolidated.objective == 2);  // X then Y, placed one at a time

    auto full = fresh_state(OrchestratorMode::FullReopt, g);
    submit(full, s1);
    submit(full, s2);
    CHECK(full.consolidated.objective == 1);  // both on Y
}

TEST_CASE("FULL_REOPT is never worse than INCREMENTAL on random sequences") {
    std::mt19937 rng(99);
    const auto pick = [&](int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(rng);
    };
    int comparable = 0;
    for (int run = 0; run < 30; ++run) {
        CAPTURE(run);
        SubstrateGraph g;
        g.resource_kinds = {"cpu", "ram"};
        const int hosts = pick(5, 7);
        for (int i = 0; i < hosts; ++i) {
            const double cap = pick(400, 800);
            g.nodes.push_back(host(fmt::format("h{}", i), {cap, cap}, pick(1, 3)));
        }
        for (int i = 1; i < hosts; ++i)
            g.links.push_back(link(fmt::format("h{}", pick(0, i - 1)), fmt::format("h{}", i),
                                   pick(200, 400), pick(1, 6)));

        std::vector<SliceRequest> sequence;
        const int slices = pick(2, 4);
        for (int s = 0; s < slices; ++s) {
            std::vector<SFCSpec> sfcs;
            const int chains = pick(1, 2);
            for (int c = 0; c < chains; ++c) {
                std::vector<NFSpec> nfs;
                const int n = pick(1, 2);
                for (int j = 0; j < n; ++j) {
                    PlacementConstraint pc = PlacementConstraint::unrestricted();
                    if (pick(0, 1) == 1) {
                        std::set<std::string> auth;
                        while (static_cast<int>(auth.size()) < 3)
                            auth.insert(fmt::format("h{}", pick(0, hosts - 1)));
                        pc = PlacementConstraint::explicit_set(auth);
                    }
                    nfs.push_back(nf(fmt::format("f{}_{}_{}", s, c, j),
                                     {double(pick(10, 60)), double(pick(10, 60))}, pc));
                }
                sfcs.push_back(sfc(fmt::format("c{}", c), nfs, pick(15, 40), pick(10, 40)));
            }
            sequence.push_back(slice(fmt::format("s{}", s), sfcs));
        }

        auto full = fresh_state(OrchestratorMode::FullReopt, g);
        auto incr = fresh_state(OrchestratorMode::Incremental, g);
        bool all_placed = true;
        for (const auto& r : sequence) {
            all_placed &= submit(full, r).kind == EventKind::Placed;
            all_placed &= submit(incr, r).kind == EventKind::Placed;
        }
        if (!all_placed) continue;
        ++comparable;
        CHECK(full.consolidated.objective <= incr.consolidated.objective);
    }
    CHECK(comparable >= 15);
}

TEST_CASE("run_loop drains the source and survives bad requests") {
    auto st = fresh_state(OrchestratorMode::FullReopt, two_hosts());
    std::vector<TimedRequest> seq = {
        {0.5, slice("a", {sfc("c", {nf("f", {40})}, 10, 1)})},
        {std::nullopt, slice("b", {sfc("c", {nf("g", {40})}, 10, 1)})},
        {2.0, slice("a", {sfc("c", {nf("f", {40})}, 10, 1)})},                 // stale
        {3.0, slice("bad", {sfc("c", {nf("h", {1}, PlacementConstraint::explicit_set({"NOPE"}))},
                            10, 1)})},                                          // invalid
        {4.0, slice("big", {sfc("c", {nf("k", {900})}, 10, 1)})},              // infeasible
    };
    std::size_t cursor = 0;
    run_loop(st, [&]() -> std::optional<TimedRequest> {
        if (cursor == seq.size()) return std::nullopt;
        return seq[cursor++];
    });

    CHECK(kinds(st) == std::vector<EventKind>{
                           EventKind::RequestAccepted, EventKind::Placed,
                           EventKind::RequestAccepted, EventKind::Placed,
                           EventKind::RejectedInfeasible,  // stale, logged by the loop
                           EventKind::RejectedInfeasible,  // invalid, logged by the loop
                           EventKind::RequestAccepted, EventKind::RejectedInfeasible,
                       });
    CHECK(st.events[4].detail.rfind("StaleRevision", 0) == 0);
    CHECK(st.events[5].detail.rfind("InvalidRequest", 0) == 0);
    CHECK(st.events[4].at == 2.0);
    CHECK(st.active.size() == 2);
    CHECK(st.events.back().sequence == st.events.size() - 1);
}

TEST_CASE("immediate stop leaves the state untouched") {
    auto st = fresh_state(OrchestratorMode::FullReopt, two_hosts());
    bool pulled = false;
    run_loop(
        st,
        [&]() -> std::optional<TimedRequest> {
            pulled = true;
            return TimedRequest{0.0, slice("s", {sfc("c", {nf("f", {1})}, 10, 1)})};
        },
        [] { return true; });
    CHECK_FALSE(pulled);
    CHECK(st.events.empty());
    CHECK(st.active.empty());
}

TEST_CASE("event log serializes to one JSON record per line") {
    auto st = fresh_state(OrchestratorMode::FullReopt, two_hosts());
    submit(st, slice("s", {sfc("c", {nf("f", {40})}, 10, 1)}), 1.5);
    const auto text = event_log_to_jsonl(st.events);

    std::vector<nlohmann::json> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        const auto end = text.find('\n', start);
        lines.push_back(nlohmann::json::parse(text.substr(start, end - start)));
        start = end + 1;
    }
    REQUIRE(lines.size() == 2);
    CHECK(lines[0]["kind"] == "REQUEST_ACCEPTED");
    CHECK(lines[0]["seq"] == 0);
    CHECK(lines[0]["at"] == 1.5);
    CHECK(lines[1]["kind"] == "PLACED");
    CHECK(lines[1]["slice"] == "s");
    CHECK(lines[1]["revision"] == 1);
    CHECK(lines[1]["detail"] == "objective 1");
}

TEST_CASE("mode names round-trip") {
    CHECK(orchestrator_mode_from_string(to_string(OrchestratorMode::FullReopt)) ==
          OrchestratorMode::FullReopt);
    CHECK(orchestrator_mode_from_string(to_string(OrchestratorMode::Incremental)) ==
          OrchestratorMode::Incremental);
    CHECK_THROWS_WITH_AS(orchestrator_mode_from_string("BOTH"), doctest::Contains("ParseError"),
                         Error);
}
