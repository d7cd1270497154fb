#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "paretune/io/csv.hpp"
#include "paretune/io/results.hpp"
#include "paretune/io/run.hpp"
#include "paretune/simulate.hpp"

using namespace paretune;
namespace fs = std::filesystem;

namespace {

class TempDir : public ::testing::Test {
protected:
    void SetUp() override
    {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / (std::string("paretune_io_") + info->test_suite_name() + "_" + info->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    std::string write(const std::string& name, const std::string& text) const
    {
        std::ofstream(path(name), std::ios::binary) << text;
        return path(name);
    }

    fs::path dir_;
};

std::string error_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const DataError& e) {
        return e.what();
    }
    return "<no DataError>";
}

RunConfig small_enet(const std::string& csv, const std::string& dir)
{
    RunConfig c;
    c.family = Family::enet;
    c.inputs = {csv};
    c.budget.total_budget = 12;
    c.budget.candidate_pool_size = 200;
    c.budget.mc_samples = 128;
    c.budget.seed = 11;
    c.out_json = dir + "/results.json";
    c.out_html = dir + "/report.html";
    c.progress = false;
    return c;
}

} // namespace

using Csv = TempDir;

TEST_F(Csv, ThreeRowsTwoPredictors)
{
    const auto p = write("a.csv", "y,x1,x2\n1,2,3\n4,5,6\n7,8,9\n");
    const auto raw = load_regression_csv(p, "y");
    EXPECT_EQ(raw.X.rows(), 3);
    EXPECT_EQ(raw.X.cols(), 2);
    EXPECT_EQ(raw.y(2), 7.0);
    EXPECT_EQ(raw.X(1, 1), 6.0);
    EXPECT_EQ(raw.predictor_names, (std::vector<std::string>{"x1", "x2"}));
}

TEST_F(Csv, ResponseMayBeAnyColumn)
{
    const auto p = write("a.csv", "x1,resp,x2\r\n1,2,3\r\n4,5,6\r\n");
    const auto raw = load_regression_csv(p, "resp");
    EXPECT_EQ(raw.y(1), 5.0);
    EXPECT_EQ(raw.X(1, 0), 4.0);
    EXPECT_EQ(raw.X(1, 1), 6.0);
    EXPECT_EQ(raw.predictor_names, (std::vector<std::string>{"x1", "x2"}));
}

TEST_F(Csv, NonNumericCellReportsCoordinates)
{
    const auto p = write("a.csv", "y,x1,x2\n1,2,3\n4,NA,6\n");
    const std::string msg = error_of([&] { load_regression_csv(p, "y"); });
    EXPECT_NE(msg.find("'NA'"), std::string::npos) << msg;
    EXPECT_NE(msg.find("row 3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("column 2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("x1"), std::string::npos) << msg;
}

TEST_F(Csv, StructuralErrors)
{
    EXPECT_NE(error_of([&] { load_regression_csv(write("r.csv", "y,x1\n1,2\n3\n"), "y"); }).find("row 3 has 1 fields"),
              std::string::npos);
    EXPECT_NE(error_of([&] { load_regression_csv(write("m.csv", "y,x1\n1,2\n"), "z"); }).find("'z' not found"),
              std::string::npos);
    EXPECT_NE(error_of([&] { load_regression_csv(write("e.csv", ""), "y"); }).find("empty"), std::string::npos);
    EXPECT_NE(error_of([&] { load_regression_csv(write("d.csv", "y,x,x\n1,2,3\n"), "y"); }).find("duplicate"),
              std::string::npos);
    EXPECT_NE(error_of([&] { load_regression_csv(write("i.csv", "y,x\n1,inf\n"), "y"); }).find("'inf'"),
              std::string::npos);
    EXPECT_THROW(read_csv(path("absent.csv")), IoError);
}

TEST_F(Csv, QuotedFieldsAndBlankLines)
{
    const auto p = write("q.csv", "\xEF\xBB\xBF\"y\",\"a,b\"\n\n 1 , \"2.5\" \n\n");
    const auto t = read_csv(p);
    EXPECT_EQ(t.header, (std::vector<std::string>{"y", "a,b"}));
    ASSERT_EQ(t.values.rows(), 1);
    EXPECT_EQ(t.values(0, 1), 2.5);
}

TEST_F(Csv, WriterRoundTripIsExact)
{
    const auto sim = simulate_enet(37, 4, 5);
    Eigen::MatrixXd m(sim.X.rows(), 5);
    m << sim.y, sim.X;
    m(0, 0) = 1e-300;
    m(1, 1) = -0.1;
    m(2, 2) = 123456789.123456789;
    write_csv(path("w.csv"), {"y", "x1", "x2", "x3", "x4"}, m);
    const auto t = read_csv(path("w.csv"));
    EXPECT_EQ(t.values, m);
    EXPECT_FALSE(fs::exists(path("w.csv.tmp")));
}

TEST_F(Csv, GroupFilesShareHeader)
{
    const auto a = write("g1.csv", "u,v,w\n1,2,3\n2,1,0\n0,0,1\n");
    const auto b = write("g2.csv", "u,v,w\n3,1,2\n1,1,1\n");
    const auto d = load_group_csvs({a, b});
    EXPECT_EQ(d.K(), 2u);
    EXPECT_EQ(d.p(), 3);
    EXPECT_EQ(d.sample_sizes, (std::vector<Eigen::Index>{3, 2}));
    EXPECT_EQ(d.variable_names, (std::vector<std::string>{"u", "v", "w"}));
}

TEST_F(Csv, PermutedHeaderNamesBothFiles)
{
    const auto a = write("g1.csv", "u,v,w\n1,2,3\n2,1,0\n");
    const auto b = write("g2.csv", "v,u,w\n3,1,2\n1,1,1\n");
    const std::string msg = error_of([&] { load_group_csvs({a, b}); });
    EXPECT_NE(msg.find("g1.csv"), std::string::npos) << msg;
    EXPECT_NE(msg.find("g2.csv"), std::string::npos) << msg;
}

TEST_F(Csv, SimulatedGroupSizesRecordedExactly)
{
    const auto sim = simulate_jgl({20, 40, 60, 80}, 20, 3);
    std::vector<std::string> paths;
    for (std::size_t k = 0; k < sim.groups.size(); ++k) {
        paths.push_back(path("g" + std::to_string(k + 1) + ".csv"));
        write_csv(paths.back(), sim.names, sim.groups[k]);
    }
    const auto d = load_group_csvs(paths);
    EXPECT_EQ(d.K(), 4u);
    EXPECT_EQ(d.p(), 20);
    EXPECT_EQ(d.sample_sizes, (std::vector<Eigen::Index>{20, 40, 60, 80}));
    for (std::size_t k = 0; k < 4; ++k) {
        const Eigen::MatrixXd c = sim.groups[k].rowwise() - sim.groups[k].colwise().mean();
        const Eigen::MatrixXd s = c.transpose() * c / static_cast<double>(sim.groups[k].rows());
        EXPECT_LT((d.S[k] - s).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Simulate, PrecisionMatricesArePositiveDefiniteAndSeeded)
{
    const auto a = simulate_jgl({30, 50, 40, 70}, 20, 9);
    const auto b = simulate_jgl({30, 50, 40, 70}, 20, 9);
    for (std::size_t k = 0; k < 4; ++k) {
        EXPECT_EQ(Eigen::LLT<Eigen::MatrixXd>(a.precision[k]).info(), Eigen::Success);
        EXPECT_EQ(a.groups[k], b.groups[k]);
    }
    EXPECT_NE(a.precision[0], a.precision[1]);
    EXPECT_EQ(simulate_enet(50, 5, 2).y, simulate_enet(50, 5, 2).y);
    EXPECT_NE(simulate_enet(50, 5, 2).y, simulate_enet(50, 5, 3).y);
}

using Results = TempDir;

TEST_F(Results, SummaryRoundTrip)
{
    ModelSummary s;
    s.family = "jgl-group";
    s.hyperparameters = {{"lambda1", 0.25}, {"lambda2", 1e-3}};
    s.stats = {{"edges group 1", 2}, {"aic", 123.5}};
    s.converged = false;
    s.iterations = 77;
    s.coefficient_names = {"a", "b", "c"};
    s.edges = {{{0, 1, -0.3}, {1, 2, 0.125}}, {}};
    const ModelSummary back = summary_from_json(summary_to_json(s, EvalStatus::ok));
    EXPECT_EQ(back.family, s.family);
    EXPECT_EQ(back.hyperparameters.size(), 2u);
    EXPECT_EQ(back.hyperparameters[1].value, 1e-3);
    EXPECT_EQ(back.stats[1].name, "aic");
    EXPECT_FALSE(back.converged);
    EXPECT_EQ(back.iterations, 77);
    EXPECT_EQ(back.coefficient_names, s.coefficient_names);
    ASSERT_EQ(back.edges.size(), 2u);
    EXPECT_EQ(back.edges[0][1].j, 2);
    EXPECT_EQ(back.edges[0][0].value, -0.3);

    ModelSummary f;
    f.family = "enet";
    f.hyperparameters = {{"lambda", 2.0}};
    f.error = "solver diverged";
    const Json fj = summary_to_json(f, EvalStatus::failed);
    EXPECT_FALSE(fj.contains("stats"));
    EXPECT_EQ(summary_from_json(fj).error, "solver diverged");
}

TEST_F(Results, RunDocumentRoundTripsAndHtmlEmbedsSidecar)
{
    write_csv(path("d.csv"), {"y", "x1", "x2", "x3"}, [] {
        const auto s = simulate_enet(40, 3, 4);
        Eigen::MatrixXd m(40, 4);
        m << s.y, s.X;
        return m;
    }());
    const RunConfig c = small_enet(path("d.csv"), dir_.string());
    const Json doc = run_to_json(c);

    std::vector<std::string> keys;
    for (const auto& [k, v] : doc.items()) keys.push_back(k);
    EXPECT_EQ(keys, (std::vector<std::string>{"version", "family", "config", "evaluations", "pareto_ids",
                                              "reference_point", "hypervolume_trace", "seed", "wall_time"}));
    EXPECT_EQ(doc["version"], "1");
    EXPECT_EQ(doc["evaluations"].size(), 12u);
    std::vector<std::string> ekeys;
    for (const auto& [k, v] : doc["evaluations"][0].items()) ekeys.push_back(k);
    EXPECT_EQ(ekeys, (std::vector<std::string>{"id", "unit", "natural", "objectives", "labels", "directions",
                                               "status", "summary"}));

    ASSERT_EQ(run(c), exit_ok);
    const Json back = read_results_json(c.out_json);
    Json a = doc, b = back;
    a.erase("wall_time");
    b.erase("wall_time");
    EXPECT_EQ(a, b);
    for (const auto& e : back["evaluations"]) {
        const EvaluationRecord r = evaluation_from_json(e);
        EXPECT_EQ(evaluation_to_json(r), e);
    }

    const std::string sidecar = read_file(c.out_json);
    const std::string html = read_file(c.out_html);
    EXPECT_EQ(extract_embedded_json(html), sidecar);
    EXPECT_NE(html.find("id=\"pared-data\""), std::string::npos);
    EXPECT_NE(html.find("getElementById(\"pared-data\")"), std::string::npos);
    EXPECT_EQ(html.find("http://"), html.find("http://www.w3.org/2000/svg"));
    EXPECT_EQ(html.find("https://"), std::string::npos);
    EXPECT_EQ(html.find("<script src"), std::string::npos);
}

TEST_F(Results, AngleBracketsAreEscapedInBothOutputs)
{
    Json j;
    j["version"] = "1";
    j["family"] = "enet";
    j["note"] = "a</script><b>";
    const std::string text = dump_results(j);
    EXPECT_EQ(text.find('<'), std::string::npos);
    EXPECT_EQ(Json::parse(text), j);
    const std::string html = render_html_report(j);
    EXPECT_EQ(extract_embedded_json(html), text + "\n");
    EXPECT_THROW(render_html_report(j, "x</script>"), ConfigError);
    EXPECT_NE(render_html_report(j, "window.custom=1;").find("window.custom=1;"), std::string::npos);
}

TEST_F(Results, EmptyArchiveIsNeverSerialized)
{
    MooResult r;
    EXPECT_THROW(results_to_json(r, "enet", Json::object()), std::invalid_argument);
}

TEST_F(Results, ExtractWithoutBlock) { EXPECT_EQ(extract_embedded_json("<html></html>"), ""); }

using Atomic = TempDir;

TEST_F(Atomic, ReplacesWholeFile)
{
    write_file_atomic(path("f.txt"), "first version, long");
    write_file_atomic(path("f.txt"), "second");
    EXPECT_EQ(read_file(path("f.txt")), "second");
    EXPECT_FALSE(fs::exists(path("f.txt.tmp")));
}

TEST_F(Atomic, UnwritableTargetIsIoError)
{
    EXPECT_THROW(write_file_atomic(path("missing/dir/f.txt"), "x"), IoError);
    EXPECT_FALSE(fs::exists(path("missing")));
}

TEST_F(Atomic, FailedRunsLeaveTargetsUntouched)
{
    write("old.json", "previous");
    RunConfig c = small_enet(write("bad.csv", "y,x1\n1,2\n3,oops\n"), dir_.string());
    c.out_json = path("old.json");
    c.out_html = path("new.html");
    std::ostringstream err;
    EXPECT_EQ(run(c, err), exit_data);
    EXPECT_NE(err.str().find("oops"), std::string::npos);
    EXPECT_EQ(read_file(path("old.json")), "previous");
    EXPECT_FALSE(fs::exists(path("new.html")));
}

TEST_F(Atomic, BudgetBelowInitialDesignFailsBeforeReadingData)
{
    RunConfig c = small_enet(path("does-not-exist.csv"), dir_.string());
    c.budget.total_budget = 4;
    std::ostringstream err;
    EXPECT_EQ(run(c, err), exit_config);
    EXPECT_NE(err.str().find("budget"), std::string::npos);
    EXPECT_FALSE(fs::exists(c.out_json));
}

TEST_F(Atomic, UnwritableOutputIsIoExit)
{
    write_csv(path("d.csv"), {"y", "x1", "x2"}, [] {
        const auto s = simulate_enet(30, 2, 8);
        Eigen::MatrixXd m(30, 3);
        m << s.y, s.X;
        return m;
    }());
    RunConfig c = small_enet(path("d.csv"), dir_.string());
    c.budget.total_budget = 5;
    c.out_json = path("no/such/dir/results.json");
    c.out_html.clear();
    std::ostringstream err;
    EXPECT_EQ(run(c, err), exit_io);
    EXPECT_FALSE(fs::exists(path("no")));
}

