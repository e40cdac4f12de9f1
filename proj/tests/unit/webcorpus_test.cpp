#include <gtest/gtest.h>

#include <deque>
#include <map>
#include <random>
#include <set>

#include "semsearch/common/files.h"
#include "semsearch/webcorpus/corpus.h"
#include "semsearch/webcorpus/crawler.h"
#include "semsearch/webcorpus/html.h"
#include "semsearch/webcorpus/url.h"
#include "test_support.h"

using namespace semsearch::webcorpus;
using Strings = std::vector<std::string>;

TEST(NormalizeUrl, Examples) {
  EXPECT_EQ(normalize_url("b.html", "http://x.test/a/a.html"), "http://x.test/a/b.html");
  EXPECT_EQ(normalize_url("HTTP://X.TEST:80/p#frag"), "http://x.test/p");
  EXPECT_EQ(normalize_url("http://x.test/p"), "http://x.test/p");
  EXPECT_EQ(normalize_url("https://X.test:443"), "https://x.test/");
  EXPECT_EQ(normalize_url("http://x.test:8080/a/./b/."), "http://x.test:8080/a/b/");
}

// Reference-resolution examples from RFC 3986 section 5.4 (base
// http://a/b/c/d;p?q), with fragments dropped by canonicalization.
TEST(NormalizeUrl, Rfc3986ResolutionExamples) {
  const std::string base = "http://a/b/c/d;p?q";
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"g:h", "g:h"},
      {"g", "http://a/b/c/g"},
      {"./g", "http://a/b/c/g"},
      {"g/", "http://a/b/c/g/"},
      {"/g", "http://a/g"},
      {"//g", "http://g/"},
      {"?y", "http://a/b/c/d;p?y"},
      {"g?y", "http://a/b/c/g?y"},
      {"#s", "http://a/b/c/d;p?q"},
      {"g#s", "http://a/b/c/g"},
      {"g?y#s", "http://a/b/c/g?y"},
      {";x", "http://a/b/c/;x"},
      {"g;x", "http://a/b/c/g;x"},
      {"g;x?y#s", "http://a/b/c/g;x?y"},
      {".", "http://a/b/c/"},
      {"./", "http://a/b/c/"},
      {"..", "http://a/b/"},
      {"../", "http://a/b/"},
      {"../g", "http://a/b/g"},
      {"../..", "http://a/"},
      {"../../", "http://a/"},
      {"../../g", "http://a/g"},
      {"../../../g", "http://a/g"},
      {"../../../../g", "http://a/g"},
      {"/./g", "http://a/g"},
      {"/../g", "http://a/g"},
      {"g.", "http://a/b/c/g."},
      {".g", "http://a/b/c/.g"},
      {"g..", "http://a/b/c/g.."},
      {"..g", "http://a/b/c/..g"},
      {"./../g", "http://a/b/g"},
      {"./g/.", "http://a/b/c/g/"},
      {"g/./h", "http://a/b/c/g/h"},
      {"g/../h", "http://a/b/c/h"},
      {"g;x=1/./y", "http://a/b/c/g;x=1/y"},
      {"g;x=1/../y", "http://a/b/c/y"},
      {"g?y/./x", "http://a/b/c/g?y/./x"},
      {"g?y/../x", "http://a/b/c/g?y/../x"},
      {"g#s/./x", "http://a/b/c/g"},
      {"g#s/../x", "http://a/b/c/g"},
  };
  for (const auto& [ref, expected] : cases) {
    EXPECT_EQ(normalize_url(ref, base), expected) << ref;
  }
}

TEST(NormalizeUrl, Errors) {
  EXPECT_THROW(normalize_url("b.html"), MalformedUrl);
  EXPECT_THROW(normalize_url(""), MalformedUrl);
  EXPECT_THROW(normalize_url("http://x.test:port/"), MalformedUrl);
  EXPECT_THROW(normalize_url("http:///nohost"), MalformedUrl);
  EXPECT_THROW(normalize_url("1http://x"), MalformedUrl);
}

TEST(NormalizeUrl, EscapesUnsafeCharacters) {
  EXPECT_EQ(normalize_url("my page.html", "http://x.test/"), "http://x.test/my%20page.html");
  EXPECT_EQ(normalize_url("http://x.test/a%2fb"), "http://x.test/a%2Fb");
}

TEST(ExtractLinks, Examples) {
  EXPECT_EQ(extract_links("<a href=\"b.html\">b</a>", "http://x.test/a.html"),
            Strings{"http://x.test/b.html"});
  EXPECT_EQ(extract_links("<p>no anchors</p>", "http://x.test/"), Strings{});
  EXPECT_EQ(extract_links("<a href='b.html'>1</a><A HREF=b.html>2</A>", "http://x.test/a.html"),
            Strings{"http://x.test/b.html"});
}

TEST(ExtractLinks, DropsNonHttpAndMalformedAndKeepsOrder) {
  const std::string html =
      "<a href=\"mailto:x@y.test\">m</a><a href=\"javascript:void(0)\">j</a>"
      "<a href=\"http://x.test:bad/\">bad</a><a name=\"anchor\">n</a>"
      "<!-- <a href=\"hidden.html\">h</a> -->"
      "<a href=\"z.html#top\">z</a><a href=\"https://other.test/q?x=1\">o</a>"
      "<a href=\"./z.html\">again</a>";
  EXPECT_EQ(extract_links(html, "http://x.test/dir/"),
            (Strings{"http://x.test/dir/z.html", "https://other.test/q?x=1"}));
}

TEST(ExtractText, Examples) {
  EXPECT_EQ(extract_text("<p>Take rest</p>").body, "Take rest");
  EXPECT_EQ(extract_text("<script>x=1</script><p>Drink water</p>").body, "Drink water");
  EXPECT_EQ(extract_text("Tea &amp; honey").body, "Tea & honey");
}

TEST(ExtractText, TitleBlocksCommentsAndEntities) {
  const auto out = extract_text(
      "<html><head><title>Cold &amp; Flu</title><style>p{color:red}</style></head>"
      "<body><h1>Home   care</h1><!-- hidden text --><p>Rest&nbsp;and <b>fluids</b>.</p>"
      "<ul><li>Ginger</li><li>Honey &#38; lemon &#x2014; daily</li></ul>Tail<br>end</body></html>");
  EXPECT_EQ(out.title, "Cold & Flu");
  EXPECT_EQ(out.body, "Home care\nRest and fluids.\nGinger\nHoney & lemon — daily\nTail\nend");
  EXPECT_EQ(extract_text("<html><body>no title</body></html>").title, "");
}

TEST(ExtractText, NeverEmitsTagLikeText) {
  EXPECT_EQ(extract_text("<p>use &lt;b&gt; tags</p>").body, "use < b> tags");
  std::mt19937 rng(17);
  const Strings pieces = {"<p>", "</p>", "<", ">", "a", "b", " ", "&lt;", "x", "<script>",
                          "</script>", "<!--", "-->", "<b", "&amp;", "\"", "=", "<div class=x>"};
  for (int trial = 0; trial < 500; ++trial) {
    std::string html;
    for (int i = 0; i < 25; ++i) html += pieces[rng() % pieces.size()];
    const auto out = extract_text(html);
    for (const auto* text : {&out.body, &out.title}) {
      for (std::size_t i = 0; i + 1 < text->size(); ++i) {
        ASSERT_FALSE((*text)[i] == '<' && std::isalpha(static_cast<unsigned char>((*text)[i + 1])))
            << html << " -> " << *text;
      }
    }
  }
}

namespace {

std::set<std::string> urls_with_status(const CrawlResult& result, CrawlStatus status) {
  std::set<std::string> urls;
  for (const auto& r : result.records) {
    if (r.status == status) urls.insert(r.url);
  }
  return urls;
}

CrawlConfig config_for(Strings seeds, int max_depth, int max_pages = 1000, int workers = 1) {
  CrawlConfig config;
  config.seeds = std::move(seeds);
  config.max_depth = max_depth;
  config.max_pages = max_pages;
  config.worker_count = workers;
  return config;
}

}  // namespace

TEST(Crawl, ChainStopsAtMaxDepth) {
  TempDir dir;
  std::map<std::string, std::string> pages;
  for (int i = 1; i <= 5; ++i) {
    const auto next = "p" + std::to_string(i + 1) + ".html";
    pages["http://x.test/p" + std::to_string(i) + ".html"] =
        i < 5 ? links_page({next}) : links_page({});
  }
  write_fixture_web(dir.path(), pages);
  FixtureFetcher fetcher(dir.path());
  const auto result = crawl(config_for({"http://x.test/p1.html"}, 3), fetcher);
  EXPECT_EQ(urls_with_status(result, CrawlStatus::Fetched),
            (std::set<std::string>{"http://x.test/p1.html", "http://x.test/p2.html",
                                   "http://x.test/p3.html", "http://x.test/p4.html"}));
  EXPECT_EQ(result.records.size(), 4u);
  EXPECT_FALSE(result.graph.nodes.contains("http://x.test/p5.html"));
  for (const auto& r : result.records) {
    EXPECT_LE(r.depth, 3);
    EXPECT_EQ(r.depth == 0, !r.parent.has_value());
  }
}

TEST(Crawl, SeedWithoutLinks) {
  TempDir dir;
  write_fixture_web(dir.path(), {{"http://x.test/", links_page({})}});
  FixtureFetcher fetcher(dir.path());
  const auto result = crawl(config_for({"http://x.test/"}, 3), fetcher);
  EXPECT_EQ(result.graph.nodes.size(), 1u);
  EXPECT_TRUE(result.graph.edges.empty());
}

TEST(Crawl, FrontierStartsWithExactlyTheSeeds) {
  const Strings seeds = {"http://www.ayushveda.com/",
                         "http://www.online-vitamins-guide.com/dietary-cure/dengue-fever.htm",
                         "http://www.webmd.com/migraines-eadaches/guide/migraines-headaches-basics"};
  TempDir dir;
  write_fixture_web(dir.path(), {{seeds[0], links_page({"/a.html"})},
                                 {seeds[1], links_page({})},
                                 {seeds[2], links_page({})},
                                 {"http://www.ayushveda.com/a.html", links_page({})}});
  FixtureFetcher fetcher(dir.path());
  const auto result = crawl(config_for(seeds, 2), fetcher);
  ASSERT_GE(result.records.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(result.records[i].url, seeds[i]);
    EXPECT_EQ(result.records[i].depth, 0);
  }
  const auto requests = fetcher.requests();
  ASSERT_EQ(requests.size(), 4u);
  std::set<std::string> first_level;
  for (std::size_t i = 0; i < 3; ++i) first_level.insert(requests[i].url);
  EXPECT_EQ(first_level, std::set<std::string>(seeds.begin(), seeds.end()));
}

TEST(Crawl, FailuresAreRecordedAndNotRetried) {
  TempDir dir;
  write_fixture_web(dir.path(), {{"http://x.test/", links_page({"broken.html", "missing.html"})},
                                 {"http://x.test/broken.html", "status=500"}});
  FixtureFetcher fetcher(dir.path());
  const auto result = crawl(config_for({"http://x.test/"}, 3), fetcher);
  EXPECT_EQ(urls_with_status(result, CrawlStatus::Failed),
            (std::set<std::string>{"http://x.test/broken.html", "http://x.test/missing.html"}));
  EXPECT_EQ(fetcher.requests().size(), 3u);
}

TEST(Crawl, OffHostLinksAreEdgesButNeverFetched) {
  TempDir dir;
  write_fixture_web(dir.path(), {{"http://x.test/", links_page({"http://y.test/", "a.html"})},
                                 {"http://x.test/a.html", links_page({"http://y.test/"})},
                                 {"http://y.test/", links_page({})}});
  FixtureFetcher fetcher(dir.path());
  const auto result = crawl(config_for({"http://x.test/"}, 3), fetcher);
  EXPECT_EQ(urls_with_status(result, CrawlStatus::Skipped), std::set<std::string>{"http://y.test/"});
  EXPECT_TRUE(result.graph.edges.contains({"http://x.test/", "http://y.test/"}));
  EXPECT_TRUE(result.graph.edges.contains({"http://x.test/a.html", "http://y.test/"}));
  for (const auto& r : fetcher.requests()) EXPECT_NE(r.url, "http://y.test/");
}

TEST(Crawl, MaxPagesTakesBreadthFirstPrefix) {
  TempDir dir;
  write_fixture_web(dir.path(),
                    {{"http://x.test/", links_page({"c.html", "a.html", "b.html"})},
                     {"http://x.test/a.html", links_page({"d.html"})},
                     {"http://x.test/b.html", links_page({})},
                     {"http://x.test/c.html", links_page({})},
                     {"http://x.test/d.html", links_page({})}});
  FixtureFetcher fetcher(dir.path());
  const auto result = crawl(config_for({"http://x.test/"}, 5, 3, 4), fetcher);
  EXPECT_EQ(urls_with_status(result, CrawlStatus::Fetched),
            (std::set<std::string>{"http://x.test/", "http://x.test/c.html", "http://x.test/a.html"}));
  EXPECT_EQ(fetcher.requests().size(), 3u);
}

TEST(Crawl, NoSeedsReachableCarriesRecords) {
  TempDir dir;
  write_fixture_web(dir.path(), {{"http://x.test/", "status=503"}});
  FixtureFetcher fetcher(dir.path());
  try {
    crawl(config_for({"http://x.test/", "http://x.test/other"}, 2), fetcher);
    FAIL() << "expected NoSeedsReachable";
  } catch (const NoSeedsReachable& e) {
    ASSERT_EQ(e.partial().records.size(), 2u);
    for (const auto& r : e.partial().records) EXPECT_EQ(r.status, CrawlStatus::Failed);
  }
}

TEST(Crawl, InvalidConfig) {
  TempDir dir;
  write_fixture_web(dir.path(), {});
  FixtureFetcher fetcher(dir.path());
  EXPECT_THROW(crawl(config_for({}, 1), fetcher), InvalidCrawlConfig);
  EXPECT_THROW(crawl(config_for({"relative.html"}, 1), fetcher), InvalidCrawlConfig);
  EXPECT_THROW(crawl(config_for({"http://x.test/"}, 1, 0), fetcher), InvalidCrawlConfig);
  EXPECT_TRUE(fetcher.requests().empty());
}

namespace {

// Random site: pages 0..n-1 on one host plus an off-host page, random links.
std::map<std::string, std::string> random_site(std::mt19937& rng, int n) {
  std::map<std::string, std::string> pages;
  for (int i = 0; i < n; ++i) {
    Strings hrefs;
    const int out = static_cast<int>(rng() % 4);
    for (int k = 0; k < out; ++k) hrefs.push_back("/p" + std::to_string(rng() % (n + 2)) + ".html");
    if (rng() % 5 == 0) hrefs.push_back("http://off.test/x.html");
    pages["http://s.test/p" + std::to_string(i) + ".html"] = links_page(hrefs);
  }
  return pages;
}

// Shortest distance from the seeds over the returned graph.
std::map<std::string, int> bfs_distances(const LinkGraph& graph, const Strings& seeds) {
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& [from, to] : graph.edges) adj[from].push_back(to);
  std::map<std::string, int> dist;
  std::deque<std::string> queue;
  for (const auto& s : seeds) {
    if (dist.emplace(s, 0).second) queue.push_back(s);
  }
  while (!queue.empty()) {
    const auto u = queue.front();
    queue.pop_front();
    for (const auto& v : adj[u]) {
      if (dist.emplace(v, dist[u] + 1).second) queue.push_back(v);
    }
  }
  return dist;
}

}  // namespace

TEST(Crawl, DepthsAreShortestPathsAndNoUrlIsFetchedTwice) {
  std::mt19937 rng(42);
  for (int trial = 0; trial < 40; ++trial) {
    TempDir dir;
    const int n = 3 + static_cast<int>(rng() % 15);
    write_fixture_web(dir.path(), random_site(rng, n));
    FixtureFetcher fetcher(dir.path());
    const Strings seeds = {"http://s.test/p0.html"};
    const int max_depth = static_cast<int>(rng() % 4);
    const auto result = crawl(config_for(seeds, max_depth, 1000, 1 + trial % 4), fetcher);
    const auto dist = bfs_distances(result.graph, seeds);
    std::set<std::string> record_urls;
    for (const auto& r : result.records) {
      EXPECT_TRUE(record_urls.insert(r.url).second) << "duplicate record " << r.url;
      ASSERT_TRUE(dist.contains(r.url));
      EXPECT_EQ(r.depth, dist.at(r.url)) << r.url;
      EXPECT_LE(r.depth, max_depth);
    }
    for (const auto& [from, to] : result.graph.edges) {
      EXPECT_TRUE(result.graph.nodes.contains(from));
      EXPECT_TRUE(result.graph.nodes.contains(to));
    }
    std::map<std::string, int> counts;
    for (const auto& req : fetcher.requests()) EXPECT_EQ(++counts[req.url], 1) << req.url;
  }
}

TEST(Crawl, WorkerCountDoesNotChangeVisitedSet) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    TempDir dir;
    write_fixture_web(dir.path(), random_site(rng, 25));
    FixtureFetcher one(dir.path());
    FixtureFetcher eight(dir.path());
    const auto a = crawl(config_for({"http://s.test/p0.html"}, 4, 12, 1), one);
    const auto b = crawl(config_for({"http://s.test/p0.html"}, 4, 12, 8), eight);
    EXPECT_EQ(urls_with_status(a, CrawlStatus::Fetched), urls_with_status(b, CrawlStatus::Fetched));
    EXPECT_EQ(a.records, b.records);
  }
}

TEST(Crawl, PolitenessSpacesRequestsPerHost) {
  TempDir dir;
  std::map<std::string, std::string> pages;
  Strings hrefs;
  for (int i = 0; i < 5; ++i) {
    hrefs.push_back("/c" + std::to_string(i) + ".html");
    pages["http://x.test/c" + std::to_string(i) + ".html"] = links_page({});
  }
  pages["http://x.test/"] = links_page(hrefs);
  write_fixture_web(dir.path(), pages);
  FixtureFetcher fetcher(dir.path());
  auto config = config_for({"http://x.test/"}, 1, 100, 4);
  config.politeness_delay = std::chrono::milliseconds(25);
  crawl(config, fetcher);
  const auto requests = fetcher.requests();
  ASSERT_EQ(requests.size(), 6u);
  for (std::size_t i = 1; i < requests.size(); ++i) {
    EXPECT_GE(requests[i].at - requests[i - 1].at, std::chrono::milliseconds(25));
  }
}

TEST(CrawlLog, JsonLinesRoundTrip) {
  std::vector<CrawlRecord> records = {
      {"http://x.test/", 0, std::nullopt, CrawlStatus::Fetched, "ab", "2024-01-01T00:00:00Z"},
      {"http://y.test/", 1, "http://x.test/", CrawlStatus::Skipped, "", std::nullopt}};
  const auto text = crawl_log_jsonl(records);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
  EXPECT_NE(text.find("\"parent\":null"), std::string::npos);
  EXPECT_EQ(parse_crawl_log(text), records);
}

TEST(StoreCorpus, WritesFilesAndManifestIdempotently) {
  TempDir dir;
  std::vector<Document> docs;
  for (const auto* url : {"http://x.test/a", "http://x.test/b", "http://x.test/c"}) {
    docs.push_back(make_document(url, std::string("<title>T ") + url + "</title><p>body " + url + "</p>"));
  }
  const auto rows = store_corpus(docs, dir.path() / "corpus");
  ASSERT_EQ(rows.size(), 3u);
  int txt = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir.path() / "corpus")) {
    if (entry.path().extension() == ".txt") ++txt;
  }
  EXPECT_EQ(txt, 3);
  EXPECT_EQ(rows[0].doc_id, doc_id_for("http://x.test/a"));
  EXPECT_EQ(rows[0].doc_id.size(), 16u);

  const auto manifest = semsearch::read_file(dir.path() / "corpus" / "manifest.jsonl");
  const auto body = semsearch::read_file(dir.path() / "corpus" / rows[1].path);
  store_corpus(docs, dir.path() / "corpus");
  EXPECT_EQ(semsearch::read_file(dir.path() / "corpus" / "manifest.jsonl"), manifest);
  EXPECT_EQ(semsearch::read_file(dir.path() / "corpus" / rows[1].path), body);
  EXPECT_EQ(load_corpus(dir.path() / "corpus"), docs);
}

TEST(StoreCorpus, EmptyCorpusAndIoFailure) {
  TempDir dir;
  EXPECT_TRUE(store_corpus({}, dir.path() / "empty").empty());
  EXPECT_EQ(semsearch::read_file(dir.path() / "empty" / "manifest.jsonl"), "");
  EXPECT_EQ(std::distance(std::filesystem::directory_iterator(dir.path() / "empty"),
                          std::filesystem::directory_iterator{}),
            1);
  write_text(dir.path() / "file", "x");
  EXPECT_THROW(store_corpus({make_document("http://x.test/", "<p>x</p>")}, dir.path() / "file" / "sub"),
               semsearch::IoFailure);
}

TEST(DocId, StableHexPrefixOfUrlHash) {
  // sha256("http://x.test/p") computed independently with Python hashlib.
  EXPECT_EQ(doc_id_for("http://x.test/p"), "caa9e682ffb7ddef");
}
