#include "brew/catalog.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace brew::vuln;

namespace {

VulnerabilityDescriptor entry(std::string id, Stage stage)
{
    VulnerabilityDescriptor v;
    v.id = std::move(id);
    v.title = v.id;
    v.stage = stage;
    v.flaw_class = FlawClass::F1;
    v.owasp = OwaspCategory::A1;
    v.routes = {"/x.secu"};
    v.challenge_sealed = stage == Stage::C4;
    return v;
}

// Two entries per stage.
const std::vector<VulnerabilityDescriptor>& mini_catalog()
{
    static const std::vector<VulnerabilityDescriptor> cat = {
        entry("a1", Stage::C1), entry("a2", Stage::C1), entry("b1", Stage::C2), entry("b2", Stage::C2),
        entry("c1", Stage::C3), entry("c2", Stage::C3), entry("d1", Stage::C4), entry("d2", Stage::C4),
    };
    return cat;
}

IdSet subset(unsigned mask, std::span<const VulnerabilityDescriptor> cat)
{
    IdSet s;
    for (std::size_t i = 0; i < cat.size(); ++i) {
        if (mask & (1u << i)) s.insert(cat[i].id);
    }
    return s;
}

bool includes(const IdSet& outer, const IdSet& inner)
{
    return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

// Intersection of every superset of `s` that satisfies the rules: the least
// closed superset, computed by enumeration.
IdSet least_closed_superset(const IdSet& s, std::span<const VulnerabilityDescriptor> cat)
{
    IdSet best;
    bool first = true;
    for (unsigned m = 0; m < (1u << cat.size()); ++m) {
        auto t = subset(m, cat);
        if (!includes(t, s) || !satisfies_stage_rules(t, cat)) continue;
        if (first) {
            best = t;
            first = false;
        } else {
            IdSet both;
            std::set_intersection(best.begin(), best.end(), t.begin(), t.end(), std::inserter(both, both.end()));
            best = both;
        }
    }
    return best;
}

}  // namespace

TEST(Catalog, OrderedByStageThenId)
{
    const auto& cat = catalog();
    EXPECT_EQ(cat.size(), 12u);
    for (std::size_t i = 1; i < cat.size(); ++i) {
        EXPECT_LT(std::pair(cat[i - 1].stage, cat[i - 1].id), std::pair(cat[i].stage, cat[i].id));
    }
}

TEST(Catalog, EntriesWellFormed)
{
    for (const auto& v : catalog()) {
        EXPECT_FALSE(v.title.empty()) << v.id;
        EXPECT_FALSE(v.description.empty()) << v.id;
        EXPECT_FALSE(v.routes.empty()) << v.id;
        for (const auto& h : v.hints) EXPECT_FALSE(h.empty()) << v.id;
        EXPECT_EQ(v.challenge_sealed, v.stage == Stage::C4) << v.id;
        EXPECT_EQ(find(v.id), &v);
    }
    EXPECT_EQ(find("nosuch"), nullptr);
}

TEST(Catalog, ListingFourEntry)
{
    const auto* v = find(ids::kSqliProfile);
    ASSERT_NE(v, nullptr);
    EXPECT_EQ(v->flaw_class, FlawClass::F1);
    EXPECT_EQ(v->stage, Stage::C2);
    EXPECT_EQ(v->owasp, OwaspCategory::A1);
    EXPECT_EQ(v->routes, std::vector<std::string>{"/profile.secu"});
}

TEST(Catalog, Md5AndManagerEntries)
{
    bool md5 = false, manager = false;
    for (const auto& v : catalog()) {
        md5 |= v.flaw_class == FlawClass::F3 && v.owasp == OwaspCategory::A6;
        manager |= v.flaw_class == FlawClass::F4 && v.owasp == OwaspCategory::A5;
    }
    EXPECT_TRUE(md5);
    EXPECT_TRUE(manager);
}

TEST(Catalog, Filters)
{
    EXPECT_TRUE(filter(OwaspCategory::A4).empty());
    EXPECT_TRUE(filter(OwaspCategory::A9).empty());
    for (const auto& v : filter(Stage::C4)) EXPECT_TRUE(v.challenge_sealed);
    std::size_t total = 0;
    for (auto s : {Stage::C1, Stage::C2, Stage::C3, Stage::C4}) total += filter(s).size();
    EXPECT_EQ(total, catalog().size());
}

TEST(Catalog, EnumStringsRoundTrip)
{
    for (auto s : {Stage::C1, Stage::C2, Stage::C3, Stage::C4}) EXPECT_EQ(parse_stage(to_string(s)), s);
    for (auto f : {FlawClass::F1, FlawClass::F2, FlawClass::F3, FlawClass::F4}) EXPECT_EQ(parse_flaw(to_string(f)), f);
    for (int i = 1; i <= 10; ++i) {
        auto a = static_cast<OwaspCategory>(i);
        EXPECT_EQ(parse_owasp(to_string(a)), a);
    }
    EXPECT_FALSE(parse_stage("C5"));
    EXPECT_FALSE(parse_owasp("A11"));
    EXPECT_FALSE(parse_flaw("f1"));
}

TEST(Resolver, ExactClosures)
{
    EXPECT_TRUE(resolve_selection({}).empty());

    IdSet c1c2;
    for (const auto& v : catalog()) {
        if (v.stage == Stage::C1 || v.stage == Stage::C2) c1c2.insert(v.id);
    }
    auto with_c3 = c1c2;
    with_c3.insert(std::string(ids::kWeakSession));
    EXPECT_EQ(resolve_selection({std::string(ids::kWeakSession)}), with_c3);

    IdSet all;
    for (const auto& v : catalog()) all.insert(v.id);
    EXPECT_EQ(resolve_selection({std::string(ids::kSecondOrderSqli)}), all);

    IdSet pair{std::string(ids::kXssSearch), std::string(ids::kSqliProfile)};
    EXPECT_EQ(resolve_selection(pair), pair);
}

TEST(Resolver, UnknownIdThrows)
{
    EXPECT_THROW(resolve_selection({"nosuch"}), SelectionError);
}

TEST(Resolver, BruteForceMiniCatalog)
{
    const auto& cat = mini_catalog();
    const unsigned n = 1u << cat.size();
    std::vector<IdSet> resolved(n);
    for (unsigned m = 0; m < n; ++m) {
        auto req = subset(m, cat);
        auto r = resolve_selection(req, cat);
        resolved[m] = r;
        EXPECT_TRUE(satisfies_stage_rules(r, cat)) << m;
        EXPECT_TRUE(includes(r, req)) << m;
        EXPECT_EQ(resolve_selection(r, cat), r) << m;
        EXPECT_EQ(r, least_closed_superset(req, cat)) << m;
    }
    for (unsigned a = 0; a < n; ++a) {
        for (unsigned b = 0; b < n; ++b) {
            if ((a & b) == a) EXPECT_TRUE(includes(resolved[b], resolved[a])) << a << " " << b;
        }
    }
    EXPECT_EQ(resolve_selection({"c1"}, cat), (IdSet{"a1", "a2", "b1", "b2", "c1"}));
    EXPECT_EQ(resolve_selection({"d2"}, cat), subset(n - 1, cat));
    EXPECT_EQ(resolve_selection({"a1", "b2"}, cat), (IdSet{"a1", "b2"}));
}

TEST(Resolver, RulePredicate)
{
    const auto& cat = mini_catalog();
    EXPECT_TRUE(satisfies_stage_rules({}, cat));
    EXPECT_TRUE(satisfies_stage_rules({"a1"}, cat));
    EXPECT_FALSE(satisfies_stage_rules({"c1"}, cat));
    EXPECT_FALSE(satisfies_stage_rules({"a1", "a2", "b1", "c1"}, cat));
    EXPECT_FALSE(satisfies_stage_rules({"a1", "a2", "b1", "b2", "c1", "c2", "d1"}, cat));
}

TEST(Resolver, OrderedFollowsCatalog)
{
    auto o = ordered({"d1", "a2", "c1"}, mini_catalog());
    EXPECT_EQ(o, (std::vector<std::string>{"a2", "c1", "d1"}));
}

TEST(Manifest, SingleSelection)
{
    auto r = validate_manifest("mode blackbox\nvuln xss-search\n");
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(r.config->enabled, IdSet{"xss-search"});
    EXPECT_EQ(r.config->mode, DeployMode::Blackbox);
    EXPECT_EQ(r.config->port, kDefaultPort);
    EXPECT_TRUE(r.notices.empty());
}

TEST(Manifest, UnknownId)
{
    auto r = validate_manifest("vuln nosuch\n");
    EXPECT_FALSE(r.ok());
    EXPECT_EQ(r.errors, std::vector<std::string>{"line 1: unknown vulnerability id 'nosuch'"});
}

TEST(Manifest, CommentsBlanksAndDefaults)
{
    auto r = validate_manifest("# course week 3\n\n   # indented\nport 9000\n");
    ASSERT_TRUE(r.ok());
    EXPECT_TRUE(r.config->enabled.empty());
    EXPECT_EQ(r.config->mode, DeployMode::Whitebox);
    EXPECT_EQ(r.config->port, 9000);
    EXPECT_TRUE(validate_manifest("").ok());
}

TEST(Manifest, CollectsEveryError)
{
    auto r = validate_manifest("mode greybox\nport 70000\nport 0\nfoo bar\nvuln\nvuln a b\n");
    EXPECT_FALSE(r.ok());
    EXPECT_EQ(r.errors, (std::vector<std::string>{
                            "line 1: unknown mode 'greybox'",
                            "line 2: invalid port '70000'",
                            "line 3: duplicate 'port' directive",
                            "line 4: unknown directive 'foo'",
                            "line 5: missing vulnerability id",
                            "line 6: too many arguments to 'vuln'",
                        }));
}

TEST(Manifest, PortRange)
{
    EXPECT_EQ(validate_manifest("port 0\n").errors, std::vector<std::string>{"line 1: invalid port '0'"});
    EXPECT_EQ(validate_manifest("port 8o80\n").errors, std::vector<std::string>{"line 1: invalid port '8o80'"});
    EXPECT_EQ(validate_manifest("port 65535\n").config->port, 65535);
}

TEST(Manifest, DuplicateMode)
{
    EXPECT_EQ(validate_manifest("mode whitebox\nmode blackbox\n").errors,
              std::vector<std::string>{"line 2: duplicate 'mode' directive"});
}

TEST(Manifest, NoticesMatchClosure)
{
    auto r = validate_manifest("vuln stored-xss-comments\n");
    ASSERT_TRUE(r.ok());
    auto closure = resolve_selection({"stored-xss-comments"});
    EXPECT_EQ(r.config->enabled, closure);
    std::vector<std::string> expected;
    for (const auto& id : ordered(closure)) {
        if (id != "stored-xss-comments") expected.push_back("added '" + id + "' (required by stage dependencies)");
    }
    EXPECT_EQ(r.notices, expected);
}

TEST(Manifest, DuplicateVulnLinesAreHarmless)
{
    auto r = validate_manifest("vuln xss-search\nvuln xss-search\n");
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(r.config->enabled, IdSet{"xss-search"});
}

TEST(Manifest, WriteRoundTrips)
{
    auto cfg = BuildConfig::from_selection({"weak-session"}, DeployMode::Blackbox, 9090);
    auto text = write_manifest(cfg);
    auto r = validate_manifest(text);
    ASSERT_TRUE(r.ok());
    EXPECT_TRUE(r.notices.empty());
    EXPECT_EQ(r.config->enabled, cfg.enabled);
    EXPECT_EQ(r.config->mode, cfg.mode);
    EXPECT_EQ(r.config->port, cfg.port);
    EXPECT_EQ(write_manifest(*r.config), text);
}
