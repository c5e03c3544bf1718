// End-to-end exit-code contract for the CLI: 0 success, 1 violation,
// 2 invalid input, 3 precision failure.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <sys/wait.h>

namespace {

int failures = 0;

int run_cli(const std::string& args) {
  const std::string cmd = std::string(RESOLVENT_CLI_PATH) + " " + args + " >/dev/null 2>cli_err.txt";
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void expect(const std::string& args, int expected) {
  const int got = run_cli(args);
  const bool ok = got == expected;
  std::printf("[%s] `%s` -> %d (want %d)\n", ok ? "ok" : "FAIL", args.c_str(), got, expected);
  if (!ok) ++failures;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

} // namespace

int main() {
  write_file("cli_spec_good.json", R"([{"re":0.3,"im":0.1},{"re":-0.2,"im":0.4},{"re":0.0,"im":-0.5}])");
  write_file("cli_spec_cap.json", R"([{"re":0.99,"im":0.0}])");
  write_file("cli_spec_bad.json", "this is not json");

  expect("verify --n 2 --family jordan --samples 5 --seed 42 --norm 2", 0);
  expect("verify --n 0 --samples 5", 2);
  expect("verify --n 2 --samples 5 --norm 7", 2);
  expect("basis-check cli_spec_good.json --degree 1024", 0);
  expect("basis-check cli_spec_cap.json", 3);
  expect("basis-check cli_spec_bad.json", 2);
  expect("basis-check cli_missing_file.json", 2);
  expect("bound-table --n-from 3 --n-to 2", 2);
  expect("bound-table --n-from 1 --n-to 4 --format csv", 0);
  expect("oracle-compare --spectrum cli_spec_good.json --lambda 1,0 --degree 128", 0);
  expect("oracle-compare --spectrum cli_spec_good.json --lambda bogus", 2);
  expect("search --n 2 --family jordan --restarts 4 --seed 7 --local-steps 4", 0);
  expect("search --n 2 --restarts 0", 2);

  // cap violation message names the cap
  run_cli("basis-check cli_spec_cap.json");
  {
    std::ifstream err("cli_err.txt");
    std::string text((std::istreambuf_iterator<char>(err)), std::istreambuf_iterator<char>());
    const bool ok = text.find("cap") != std::string::npos;
    std::printf("[%s] cap violation message names the cap\n", ok ? "ok" : "FAIL");
    if (!ok) ++failures;
  }

  for (const char* f : {"cli_spec_good.json", "cli_spec_cap.json", "cli_spec_bad.json", "cli_err.txt"})
    std::remove(f);
  std::printf("%s\n", failures == 0 ? "CLI CONTRACT PASS" : "CLI CONTRACT FAIL");
  return failures == 0 ? 0 : 1;
}
