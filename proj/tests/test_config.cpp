#include <gtest/gtest.h>

#include <string>

#include "support.hpp"

using namespace wigner;

namespace {

const std::string base = "period_l = 1\ncoeffs = 20, 20\nNx = 100\nboundary = mono:0\n";

std::string key_of_error(const std::string& text)
{
    try {
        parse_config_string(text).build_system();
    } catch (const ConfigError& e) {
        return e.key();
    }
    return "<no error>";
}

}  // namespace

TEST(Config, DefaultsAndRequiredKeys)
{
    const RunConfig cfg = parse_config_string(base);
    EXPECT_EQ(cfg.period_l, 1.0);
    EXPECT_EQ(cfg.coeffs, (std::vector<double>{20, 20}));
    EXPECT_EQ(cfg.s_over_kappa, 0.5);
    EXPECT_EQ(cfg.M, 40);
    EXPECT_EQ(cfg.method, Method::central);
    EXPECT_EQ(cfg.rel_tol, 1e-12);
    EXPECT_EQ(cfg.emit, (std::set<Emit>{Emit::solution, Emit::density}));
    const WignerSystem sys = cfg.build_system();
    EXPECT_EQ(sys.grid.size(), 80);
    EXPECT_EQ(sys.mesh.cells(), 100);
}

TEST(Config, CommentsBlankLinesAndOptionalKeys)
{
    const RunConfig cfg = parse_config_string("# header\n\n" + base +
                                              "scheme = upwind2   # trailing\nM = 3\nsymmetric = false\n"
                                              "rel_tol = 1e-10\noutput_dir = out/x\nemit = current, report\n");
    EXPECT_EQ(cfg.method, Method::upwind2);
    EXPECT_EQ(cfg.M, 3);
    EXPECT_FALSE(cfg.symmetric);
    EXPECT_EQ(cfg.rel_tol, 1e-10);
    EXPECT_EQ(cfg.output_dir, "out/x");
    EXPECT_EQ(cfg.emit, (std::set<Emit>{Emit::current, Emit::report}));
    EXPECT_EQ(cfg.build_system().grid.size(), 7);
}

TEST(Config, TableBoundary)
{
    const auto cfg = parse_config_string("period_l = 1\ncoeffs = 0\nNx = 4\nboundary = table:0=0.5, -1=0.5\n");
    const auto sys = cfg.build_system();
    EXPECT_EQ(sys.boundary[sys.grid.position_of(0)], 0.5);
    EXPECT_EQ(sys.boundary[sys.grid.position_of(-1)], 0.5);
}

TEST(Config, ErrorsNameTheOffendingKey)
{
    EXPECT_EQ(key_of_error(base + "s_over_kappa = 0\n"), "s_over_kappa");
    EXPECT_EQ(key_of_error(base + "s_over_kappa = 1\n"), "s_over_kappa");
    EXPECT_EQ(key_of_error("period_l = 1\ncoeffs = 20, 20\nNx = 101\nboundary = mono:0\n"), "Nx");
    EXPECT_EQ(key_of_error("period_l = -1\ncoeffs = 20, 20\nNx = 100\nboundary = mono:0\n"), "period_l");
    EXPECT_EQ(key_of_error("period_l = 1\ncoeffs = 20, x\nNx = 100\nboundary = mono:0\n"), "coeffs");
    EXPECT_EQ(key_of_error("period_l = 1\ncoeffs = 20\nNx = 100\nboundary = mono:-1\n"), "boundary");
    EXPECT_EQ(key_of_error("period_l = 1\ncoeffs = 20\nNx = 100\nboundary = mono:99\n"), "boundary");
    EXPECT_EQ(key_of_error("period_l = 1\ncoeffs = 20\nNx = 100\nboundary = bogus\n"), "boundary");
    EXPECT_EQ(key_of_error("period_l = 1\ncoeffs = 20\nNx = 100\nboundary = table:3\n"), "boundary");
    EXPECT_EQ(key_of_error(base + "M = 0\n"), "M");
    EXPECT_EQ(key_of_error(base + "M = 2.5\n"), "M");
    EXPECT_EQ(key_of_error(base + "scheme = spectral\n"), "scheme");
    EXPECT_EQ(key_of_error(base + "rel_tol = 0.1\n"), "rel_tol");
    EXPECT_EQ(key_of_error(base + "symmetric = maybe\n"), "symmetric");
    EXPECT_EQ(key_of_error(base + "emit = pictures\n"), "emit");
    EXPECT_EQ(key_of_error(base + "colour = blue\n"), "colour");
    EXPECT_EQ(key_of_error(base + "Nx = 200\n"), "Nx");
    EXPECT_EQ(key_of_error("coeffs = 20\nNx = 100\nboundary = mono:0\n"), "period_l");
    EXPECT_EQ(key_of_error("period_l = 1\nNx = 100\nboundary = mono:0\n"), "coeffs");
    EXPECT_EQ(key_of_error("period_l = 1\ncoeffs = 1\nboundary = mono:0\n"), "Nx");
    EXPECT_EQ(key_of_error("period_l = 1\ncoeffs = 1\nNx = 4\n"), "boundary");
}

TEST(Config, MalformedLine)
{
    EXPECT_THROW(parse_config_string(base + "just words\n"), ConfigError);
}

TEST(Config, MissingFileIsIoError) { EXPECT_THROW(load_config("/nonexistent/paper.cfg"), IoError); }

TEST(Config, BundledBarrierConfig)
{
    const RunConfig cfg = load_config(std::string(WIGNER_CONFIG_DIR) + "/paper.cfg");
    const WignerSystem sys = cfg.build_system();
    EXPECT_EQ(sys.potential.coeffs(), (std::vector<double>{20, 20}));
    EXPECT_EQ(sys.grid.size(), 80);
    EXPECT_DOUBLE_EQ(sys.grid.shift(), sys.grid.kappa() / 2);
    EXPECT_EQ(sys.boundary.values(), mono_energetic_boundary(sys.grid, 0).values());
}
