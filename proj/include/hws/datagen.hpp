#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace hws {

// Deterministic sample datasets following the two supported CSV schemas.
// They stand in for the original public files, which are not redistributed
// here; point the CLI at the real downloads to reproduce published numbers.

/// Kaggle-style passenger table: PassengerId,Survived,Pclass,Name,Sex,Age,
/// SibSp,Parch,Ticket,Fare,Cabin,Embarked. Includes missing Age/Cabin/
/// Embarked cells and quoted names containing commas.
std::string titanicLikeCsv(std::size_t rows, std::uint64_t seed);

/// Churn-modelling table: RowNumber,CustomerId,Surname,CreditScore,Geography,
/// Gender,Age,Tenure,Balance,NumOfProducts,HasCrCard,IsActiveMember,
/// EstimatedSalary,Exited.
std::string churnLikeCsv(std::size_t rows, std::uint64_t seed);

void writeSampleCsv(const std::string& schema, std::size_t rows, std::uint64_t seed,
                    const std::filesystem::path& out);

}  // namespace hws
