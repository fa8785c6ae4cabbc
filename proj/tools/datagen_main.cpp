#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hws/datagen.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Write a deterministic sample dataset in one of the supported CSV schemas"};
    std::string schema = "titanic";
    std::size_t rows = 891;
    std::uint64_t seed = 7;
    std::string out = "sample.csv";
    app.add_option("--schema", schema, "titanic | churn")->required();
    app.add_option("--rows", rows, "number of data rows");
    app.add_option("--seed", seed, "generator seed");
    app.add_option("--out", out, "output CSV path")->required();
    CLI11_PARSE(app, argc, argv);

    try {
        hws::writeSampleCsv(schema, rows, seed, out);
        std::cout << "wrote " << rows << " " << schema << "-schema rows to " << out << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
