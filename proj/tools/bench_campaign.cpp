// Times the serial reference loop against the OpenMP campaign runner on
// the same configuration and checks that both produce identical reports.

#include <chrono>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dmst/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"campaign runner benchmark: serial reference vs OpenMP"};
  std::uint32_t prime = 3;
  app.add_option("--prime", prime, "odd prime");
  int workers = 4;
  app.add_option("--workers", workers, "workers for the parallel run");
  std::int64_t max_s = 5;
  app.add_option("--max-s", max_s, "largest operator exterior index s");
  CLI11_PARSE(app, argc, argv);

  dmst::CampaignConfig cfg;
  cfg.primes = {prime};
  cfg.max_s = max_s;

  using clock = std::chrono::steady_clock;
  const auto ms = [](clock::duration d) {
    return std::chrono::duration<double, std::milli>(d).count();
  };

  cfg.workers = 1;
  const auto t0 = clock::now();
  const dmst::Report serial = dmst::run_campaign(cfg);
  const auto t1 = clock::now();

  cfg.workers = workers;
  const dmst::Report parallel = dmst::run_campaign(cfg);
  const auto t2 = clock::now();

  const std::string a = dmst::report_to_json(serial);
  const std::string b = dmst::report_to_json(parallel);
  if (a != b) {
    std::cerr << "FAIL: parallel report differs from the serial reference\n";
    return 1;
  }

  const double ts = ms(t1 - t0);
  const double tp = ms(t2 - t1);
  std::cout << "prime " << prime << ", "
            << serial.per_prime.front().cases.size() << " cases\n"
            << "serial   " << ts << " ms\n"
            << "workers=" << workers << " " << tp << " ms\n"
            << "speedup  " << (tp > 0 ? ts / tp : 0.0) << "x\n"
            << "reports identical\n";
  return 0;
}
