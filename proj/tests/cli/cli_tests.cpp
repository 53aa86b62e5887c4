#include <doctest.h>

#include "shell.hpp"

using cli::workbench;

namespace {

const char* canonical = R"(chart R3 dim 3 vars x1 x2 x3
algebroid TR3 = tangent R3
tensor pi on TR3 = x3*Dx1*Dx2 + x1*Dx2*Dx3 + x2*Dx3*Dx1
algebroid so3 = cotangent pi
im T on so3 type (q=0, p=2) {
  l e1 = L1
  l e2 = dx2
  l e3 = dx3
}
task check-im T
)";

std::string with_l1(const std::string& l1) {
    std::string s = canonical;
    s.replace(s.find("L1"), 2, l1);
    return s;
}

}  // namespace

TEST_CASE("exit codes") {
    CHECK(workbench("run " + cli::write_temp("ok.alg", with_l1("dx1"))).code == 0);
    CHECK(workbench("run " + cli::write_temp("mut.alg", with_l1("2*dx1"))).code == 4);
    CHECK(workbench("run /nonexistent/problem.alg").code == 1);
    CHECK(workbench("frobnicate").code == 1);
    CHECK(workbench("run " + cli::write_temp("syntax.alg", with_l1("dx1 +* x2"))).code == 2);
    CHECK(workbench("run " + cli::write_temp("stmt.alg", "chart R2 vars x y\nfoo bar\n")).code == 2);
    CHECK(workbench("run " + cli::write_temp("unknown.alg", "chart R2 vars x y\nalgebroid A = tangent R3\n")).code == 3);
    CHECK(workbench("run " + cli::write_temp("degree.alg", with_l1("dx1*dx2"))).code == 3);
    CHECK(workbench("run " + cli::write_temp("mixed.alg", "chart R2 vars x y\nalgebroid A = tangent R2\ntensor t on A = dx + Dy\n")).code == 3);
    CHECK(workbench("run " + cli::write_temp("task.alg", with_l1("dx1") + "task check-im S\n")).code == 3);
    CHECK(workbench("run " + cli::write_temp("cmd.alg", with_l1("dx1") + "task launch T\n")).code == 3);
    CHECK(workbench("gallery no-such-entry").code == 1);
}

TEST_CASE("failing report names IM2 with a witness") {
    auto r = workbench("run " + cli::write_temp("mut2.alg", with_l1("2*dx1")));
    REQUIRE(r.code == 4);
    CHECK(r.out.find("IM2: fail") != std::string::npos);
    CHECK(r.out.find("[IM2] ") != std::string::npos);
}

TEST_CASE("text and JSON reports carry the same residuals") {
    std::string file = cli::write_temp("parity.alg", with_l1("2*dx1 + x3*dx2") + "task cocycle-equiv T\n");
    std::string json = std::string(CLI_TMP_DIR) + "/parity.json";
    auto r = workbench("run " + file + " --json " + json);
    REQUIRE(r.code == 4);
    auto text = cli::text_residuals(r.out);
    CHECK(text.size() > 0);
    CHECK(text == cli::json_residuals(json));

    nlohmann::json doc = nlohmann::json::parse(std::ifstream(json));
    REQUIRE(doc.size() == 2);
    CHECK(doc[0]["task"] == "check-im T");
    CHECK(doc[0]["status"] == "fail");
    CHECK(doc[0]["residuals"].size() > 0);
    CHECK(doc[0]["elapsed_ms"].is_number());
    CHECK(doc[1]["status"] == "pass");
}

TEST_CASE("task selection and probe sets") {
    std::string file = cli::write_temp("two.alg", with_l1("dx1") + "task cocycle-equiv T as equiv\n");
    auto r = workbench("run " + file + " --task equiv");
    CHECK(r.code == 0);
    CHECK(r.out.find("[pass] equiv") != std::string::npos);
    CHECK(r.out.find("check-im T") == std::string::npos);
    CHECK(workbench("run " + file + " --task missing").code == 1);
    CHECK(workbench("run " + file + " --probes frames").code == 0);
    CHECK(workbench("run " + file + " --probes many").code == 1);
}

TEST_CASE("expect fail") {
    std::string file = cli::write_temp("expect.alg", with_l1("2*dx1") + "task check-im T expect fail as flipped\n");
    auto r = workbench("run " + file + " --task flipped");
    CHECK(r.code == 0);
    CHECK(r.out.find("[IM2] ") != std::string::npos);
    std::string good = cli::write_temp("expect2.alg", with_l1("dx1") + "task check-im T expect fail as flipped\n");
    auto g = workbench("run " + good + " --task flipped");
    CHECK(g.code == 4);
    CHECK(g.out.find("[expect fail]") != std::string::npos);
}

TEST_CASE("gallery") {
    auto so3 = workbench("gallery so3star");
    REQUIRE(so3.code == 0);
    CHECK(so3.out.find("bracket [e1,e2] = e3") != std::string::npos);
    auto plane = workbench("gallery tangent-plane");
    CHECK(plane.out.find("algebroid TR2 = tangent R2") != std::string::npos);

    std::string emitted = std::string(CLI_TMP_DIR) + "/so3.alg";
    REQUIRE(workbench("gallery so3_canonical --emit " + emitted).code == 0);
    CHECK(workbench("run " + emitted).code == 0);
}

TEST_CASE("check") {
    auto r = workbench("check " + cli::quote("(x^2 - 1)/(x - 1)"));
    CHECK(r.code == 0);
    CHECK(r.out == "x + 1\n");
    CHECK(workbench("check " + cli::quote("(x + y)^2 == x^2 + 2*x*y + y^2")).code == 0);
    CHECK(workbench("check " + cli::quote("x*y == y*x + 1")).code == 4);
    CHECK(workbench("check " + cli::quote("x +")).code == 2);
}
