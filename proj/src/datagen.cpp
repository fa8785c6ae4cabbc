#include "hws/datagen.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "hws/errors.hpp"
#include "hws/rng.hpp"

namespace hws {

namespace {

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

std::string fixed(double v, int precision) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(precision);
    s << v;
    return s.str();
}

const char* kLastNames[] = {"Smith",  "Jones",   "Brown",  "Walsh",  "Olsen",  "Meyer",
                            "Kovacs", "Rossi",   "Tanaka", "Silva",  "Novak",  "Dubois",
                            "Okafor", "Andersen", "Costa",  "Petrov", "Haller", "Lindqvist"};
const char* kFirstNames[] = {"John", "Mary", "Peter", "Anna",  "Louis", "Clara",
                             "Hugo", "Nora", "Felix", "Ida",   "Oscar", "Ruth",
                             "Ivan", "Lena", "Marco", "Sofia", "Owen",  "Vera"};

}  // namespace

std::string titanicLikeCsv(std::size_t rows, std::uint64_t seed) {
    rng::Stream rand(seed);
    std::ostringstream out;
    out << "PassengerId,Survived,Pclass,Name,Sex,Age,SibSp,Parch,Ticket,Fare,Cabin,Embarked\n";
    for (std::size_t i = 0; i < rows; ++i) {
        const double classDraw = rand.uniform01();
        const int pclass = classDraw < 0.24 ? 1 : classDraw < 0.45 ? 2 : 3;
        const bool female = rand.uniform01() < 0.35;
        const bool ageMissing = rand.uniform01() < 0.20;
        const double age = std::min(80.0, std::max(0.4, 29.0 + 13.0 * rand.gaussian()));
        const int sibsp = rand.uniform01() < 0.32 ? static_cast<int>(rand.below(4)) + 1 : 0;
        const int parch = rand.uniform01() < 0.24 ? static_cast<int>(rand.below(3)) + 1 : 0;
        const double fare =
            std::max(4.0, (pclass == 1 ? 78.0 : pclass == 2 ? 21.0 : 12.0) * std::exp(0.45 * rand.gaussian()));
        const double cabinChance = pclass == 1 ? 0.80 : pclass == 2 ? 0.18 : 0.05;
        const bool hasCabin = rand.uniform01() < cabinChance;
        const char deck = static_cast<char>('A' + static_cast<int>(rand.below(7)));
        const double embarkedDraw = rand.uniform01();
        const bool embarkedMissing = rand.uniform01() < 0.02;
        const char* embarked = embarkedDraw < 0.72 ? "S" : embarkedDraw < 0.91 ? "C" : "Q";

        // Survival odds follow class, sex, age and cabin with label noise.
        const double ageUsed = ageMissing ? 29.0 : age;
        const double z = 1.1 + 2.45 * (female ? 1.0 : 0.0) - 1.05 * (pclass - 1) -
                         0.030 * (ageUsed - 29.0) + 0.55 * (hasCabin ? 1.0 : 0.0) -
                         0.18 * sibsp;
        const int survived = rand.uniform01() < logistic(z) ? 1 : 0;

        out << (i + 1) << ',' << survived << ',' << pclass << ',';
        out << '"' << kLastNames[rand.below(std::size(kLastNames))] << ", "
            << (female ? "Mrs. " : "Mr. ") << kFirstNames[rand.below(std::size(kFirstNames))] << '"' << ',';
        out << (female ? "female" : "male") << ',';
        out << (ageMissing ? std::string() : fixed(age, 1)) << ',';
        out << sibsp << ',' << parch << ',';
        out << "T" << 100000 + rand.below(900000) << ',';
        out << fixed(fare, 4) << ',';
        if (hasCabin) {
            out << deck << 10 + rand.below(120);
        }
        out << ',';
        out << (embarkedMissing ? "" : embarked) << '\n';
    }
    return out.str();
}

std::string churnLikeCsv(std::size_t rows, std::uint64_t seed) {
    rng::Stream rand(seed);
    std::ostringstream out;
    out << "RowNumber,CustomerId,Surname,CreditScore,Geography,Gender,Age,Tenure,Balance,"
           "NumOfProducts,HasCrCard,IsActiveMember,EstimatedSalary,Exited\n";
    for (std::size_t i = 0; i < rows; ++i) {
        const int creditScore = static_cast<int>(std::min(850.0, std::max(350.0, 650.0 + 96.0 * rand.gaussian())));
        const double geoDraw = rand.uniform01();
        const char* geography = geoDraw < 0.50 ? "France" : geoDraw < 0.75 ? "Germany" : "Spain";
        const bool male = rand.uniform01() < 0.55;
        const int age = static_cast<int>(std::min(92.0, std::max(18.0, 39.0 + 10.5 * rand.gaussian())));
        const int tenure = static_cast<int>(rand.below(11));
        const bool zeroBalance = rand.uniform01() < 0.36;
        const double balance = zeroBalance ? 0.0 : std::max(0.0, 76000.0 + 52000.0 * rand.gaussian());
        const int products = 1 + static_cast<int>(rand.below(4) == 3 ? rand.below(2) + 2 : rand.below(2));
        const int hasCard = rand.uniform01() < 0.70 ? 1 : 0;
        const int active = rand.uniform01() < 0.51 ? 1 : 0;
        const double salary = 1000.0 + 199000.0 * rand.uniform01();

        const double z = -2.1 + 0.072 * (age - 39) - 1.15 * active +
                         0.95 * (std::strcmp(geography, "Germany") == 0 ? 1.0 : 0.0) +
                         0.45 * (balance > 1.0 ? 1.0 : 0.0) + 0.85 * (products >= 3 ? 1.0 : 0.0) -
                         0.35 * (male ? 1.0 : 0.0) - 0.004 * ((creditScore - 650.0) / 10.0);
        const int exited = rand.uniform01() < logistic(z) ? 1 : 0;

        out << (i + 1) << ',' << 15000000 + rand.below(800000) << ','
            << kLastNames[rand.below(std::size(kLastNames))] << ',' << creditScore << ',' << geography
            << ',' << (male ? "Male" : "Female") << ',' << age << ',' << tenure << ','
            << fixed(balance, 2) << ',' << products << ',' << hasCard << ',' << active << ','
            << fixed(salary, 2) << ',' << exited << '\n';
    }
    return out.str();
}

void writeSampleCsv(const std::string& schema, std::size_t rows, std::uint64_t seed,
                    const std::filesystem::path& out) {
    std::string text;
    if (schema == "titanic") {
        text = titanicLikeCsv(rows, seed);
    } else if (schema == "churn") {
        text = churnLikeCsv(rows, seed);
    } else {
        throw PreconditionError("unknown schema '" + schema + "' (expected titanic or churn)");
    }
    std::ofstream file(out, std::ios::binary);
    if (!file) throw Error("cannot write '" + out.string() + "'");
    file << text;
}

}  // namespace hws
