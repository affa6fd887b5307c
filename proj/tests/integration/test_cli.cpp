// Drives the hoplink binary end to end through the shell.

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "hoplink/io.hpp"

using namespace hoplink;
namespace fs = std::filesystem;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "hoplink_test_cli";

struct Run {
    int code;
    std::string output;
};

Run cli(const std::string& args) {
    fs::create_directories(kRoot);
    const auto log = kRoot / "last_output.txt";
    const std::string cmd = std::string("\"") + HOPLINK_CLI_PATH + "\" " + args + " > \"" + log.string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, io::read_text(log)};
}

fs::path fresh(const std::string& name) {
    const auto dir = kRoot / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

}  // namespace

TEST_CASE("generate writes one clique pattern with three links") {
    const auto dir = fresh("gen_clique");
    const auto r = cli("generate --k 5 --cliques k1,k2,k5 --p 1 --seed 7 --out " + q(dir / "shards"));
    REQUIRE(r.code == 0);
    const auto records = io::read_training_input(dir / "shards");
    REQUIRE(records.size() == 1);
    const auto bits = record_pattern(records[0], {});
    CHECK(bits.count_active() == 3);
    CHECK(zeta(bits, 5) == AssociationSet(5, {{0, 1}, {0, 4}, {1, 4}}));

    const auto manifest = io::read_json(dir / "shards" / "manifest.json");
    CHECK(manifest.at("version") == 1);
    CHECK(manifest.dump().find(io::sha256_file(dir / "shards" / "shard-0000.jsonl")) != std::string::npos);
}

TEST_CASE("generate is deterministic and validates its spec") {
    const auto dir = fresh("gen_det");
    const std::string flags = "generate --k 8 --p 30 --cliques k1,k2,k3 --cliques k4,k8 --clique-prob 0.7 "
                              "--background-rate 0.2 --files 3 --seed 5 --out ";
    REQUIRE(cli(flags + q(dir / "a")).code == 0);
    REQUIRE(cli(flags + q(dir / "b")).code == 0);
    for (const auto& f : io::list_shard_files(dir / "a"))
        CHECK(io::read_text(f) == io::read_text(dir / "b" / f.filename()));

    CHECK(cli("generate --p 0 --out " + q(dir / "c")).code == 2);
    CHECK(cli("generate --k 4 --cliques k1 --out " + q(dir / "c")).code == 2);
    CHECK(cli("generate --bogus").code == 2);
}

TEST_CASE("train is independent of the shard count") {
    const auto dir = fresh("train_shards");
    REQUIRE(cli("generate --k 10 --p 64 --cliques k1,k2,k5 --cliques k3,k7,k9 --clique-prob 0.5 "
                "--background-rate 0.3 --files 4 --seed 11 --out " +
                q(dir / "shards"))
                .code == 0);
    const auto one = cli("train --in " + q(dir / "shards") + " --shards 1 --out " + q(dir / "w1.json"));
    REQUIRE(one.code == 0);
    CHECK(one.output.find("pattern_count=64") != std::string::npos);
    CHECK(one.output.find("L=45") != std::string::npos);
    REQUIRE(cli("train --in " + q(dir / "shards") + " --shards 8 --out " + q(dir / "w8.json")).code == 0);
    CHECK(io::read_text(dir / "w1.json") == io::read_text(dir / "w8.json"));

    CHECK(cli("train --in " + q(dir / "shards") + " --rule oja --shards 2 --out " + q(dir / "o.json")).code == 2);
    CHECK(cli("train --in " + q(dir / "shards") + " --rule oja --out " + q(dir / "o.json")).code == 0);
}

TEST_CASE("train rejects empty and mixed input") {
    const auto dir = fresh("train_bad");
    fs::create_directories(dir / "empty");
    CHECK(cli("train --in " + q(dir / "empty") + " --out " + q(dir / "w.json")).code == 2);
    CHECK(cli("train --in " + q(dir / "missing") + " --out " + q(dir / "w.json")).code == 2);

    io::write_text(dir / "mixed" / "shard-0000.jsonl", "{\"k\":3,\"bits\":[1,-1,1]}\n");
    io::write_text(dir / "mixed" / "shard-0001.jsonl", "{\"k\":4,\"bits\":[1,-1,1,1,1,1]}\n");
    CHECK(cli("train --in " + q(dir / "mixed") + " --out " + q(dir / "w.json")).code == 2);
}

TEST_CASE("recall through the binary") {
    const auto dir = fresh("recall");
    const auto stored = random_pattern(45, 3);
    io::write_text(dir / "shard-0000.jsonl", io::format_shard(std::vector<ShardRecord>{PatternRecord{10, stored}}));
    REQUIRE(cli("train --in " + q(dir / "shard-0000.jsonl") + " --out " + q(dir / "w.json")).code == 0);

    io::write_json(dir / "stored.json", io::pattern_to_json(10, stored));
    auto r = cli("recall --weights " + q(dir / "w.json") + " --probe " + q(dir / "stored.json") + " --out " +
                 q(dir / "r.json"));
    REQUIRE(r.code == 0);
    auto doc = io::read_json(dir / "r.json");
    CHECK(doc.at("converged") == true);
    CHECK(io::pattern_from_json(doc).bits == stored);

    io::write_json(dir / "noisy.json", io::pattern_to_json(10, perturb(stored, 0.1, 4)));
    REQUIRE(cli("recall --weights " + q(dir / "w.json") + " --probe " + q(dir / "noisy.json") + " --seed 2 --out " +
                q(dir / "n.json"))
                .code == 0);
    CHECK(io::pattern_from_json(io::read_json(dir / "n.json")).bits == stored);

    io::write_json(dir / "empty_w.json", io::to_json(WeightState::hebbian(45)));
    REQUIRE(cli("recall --weights " + q(dir / "empty_w.json") + " --probe " + q(dir / "noisy.json") +
                " --mode sync --out " + q(dir / "e.json"))
                .code == 0);
    CHECK(io::pattern_from_json(io::read_json(dir / "e.json")).bits == BipolarPattern(45, 1));

    io::write_json(dir / "short.json", io::pattern_to_json(5, random_pattern(10, 1)));
    CHECK(cli("recall --weights " + q(dir / "w.json") + " --probe " + q(dir / "short.json")).code == 2);

    // Printing to stdout emits the same document.
    r = cli("recall --weights " + q(dir / "w.json") + " --probe " + q(dir / "stored.json"));
    REQUIRE(r.code == 0);
    CHECK(io::Json::parse(r.output) == io::read_json(dir / "r.json"));
}

TEST_CASE("evaluate through the binary") {
    const auto dir = fresh("evaluate");
    const AssociationSet stored(5, {{0, 1}, {0, 4}, {1, 4}});
    const AssociationSet result(5, {{0, 1}, {1, 4}, {2, 3}});
    io::write_json(dir / "p.json", io::pattern_to_json(5, vectorize(stored)));
    io::write_json(dir / "r.json", io::pattern_to_json(5, vectorize(result)));
    io::write_json(dir / "neg.json", io::pattern_to_json(5, vectorize(stored).negated()));
    io::write_json(dir / "k4.json", io::pattern_to_json(4, BipolarPattern(6, 1)));

    auto r = cli("evaluate --stored " + q(dir / "p.json") + " --test " + q(dir / "p.json") + " --result " +
                 q(dir / "p.json"));
    REQUIRE(r.code == 0);
    auto doc = io::Json::parse(r.output);
    CHECK(doc.at("beta").empty());
    CHECK(doc.at("gamma").empty());
    CHECK(doc.at("recovery_accuracy") == 1.0);

    r = cli("evaluate --stored " + q(dir / "p.json") + " --test " + q(dir / "p.json") + " --result " +
            q(dir / "r.json") + " --stage 2");
    REQUIRE(r.code == 0);
    doc = io::Json::parse(r.output);
    CHECK(io::stage_report_from_json(doc, 5).beta == AssociationSet(5, {{0, 4}}));
    CHECK(io::stage_report_from_json(doc, 5).gamma == AssociationSet(5, {{2, 3}}));
    CHECK(doc.at("recovery_accuracy") == 0.5);
    CHECK(doc.at("stage") == 2);

    r = cli("evaluate --stored " + q(dir / "p.json") + " --test " + q(dir / "p.json") + " --result " +
            q(dir / "neg.json"));
    REQUIRE(r.code == 0);
    doc = io::Json::parse(r.output);
    CHECK(doc.at("cosine_result_vs_stored").get<double>() == -doc.at("cosine_test_vs_stored").get<double>());

    r = cli("--format csv evaluate --stored " + q(dir / "p.json") + " --test " + q(dir / "p.json") + " --result " +
            q(dir / "r.json"));
    CHECK(r.code == 0);
    CHECK(r.output.find("recovery_accuracy") != std::string::npos);

    CHECK(cli("evaluate --stored " + q(dir / "p.json") + " --test " + q(dir / "p.json") + " --result " +
              q(dir / "k4.json"))
              .code == 2);
}

TEST_CASE("forgetting experiment through the binary") {
    const auto dir = fresh("experiment");
    auto r = cli("experiment forgetting --repeats 4 --seed 3 --out " + q(dir / "json"));
    REQUIRE(r.code == 0);
    CHECK(r.output.find("spearman") != std::string::npos);
    const auto reports = io::read_json(dir / "json" / "reports.json");
    const auto summary = io::read_json(dir / "json" / "summary.json");
    CHECK(summary.at("version") == 1);
    CHECK(io::experiment_config_from_json(io::read_json(dir / "json" / "config.json")).repeats == 4);
    CHECK(reports.dump().size() > 0);

    REQUIRE(cli("experiment forgetting --repeats 4 --seed 3 --out " + q(dir / "again")).code == 0);
    CHECK(io::read_text(dir / "json" / "reports.json") == io::read_text(dir / "again" / "reports.json"));

    REQUIRE(cli("--format csv experiment forgetting --stages 1 --repeats 2 --out " + q(dir / "csv")).code == 0);
    CHECK(fs::exists(dir / "csv" / "stages.csv"));
    CHECK(fs::exists(dir / "csv" / "summary.csv"));

    CHECK(cli("experiment forgetting --stages 0").code == 2);
    CHECK(cli("experiment forgetting --dissimilarity 1.5").code == 2);
}

TEST_CASE("help exits cleanly") {
    CHECK(cli("--help").code == 0);
    CHECK(cli("").code != 1);
}
