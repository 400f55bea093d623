//! Keyword rankings per year and detection of emerging keywords.
//!
//! A keyword is *new* when it reaches some top-n ranking in the late part of
//! the span but none in the early part. A keyword is *rising* when, from the
//! year it first enters a ranking through the final year, it stays ranked every
//! year and its position never gets worse.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

use crate::filter::Filter;
use crate::model::Publication;
use crate::textkit::{csv_field, top_keywords, KeywordConfig, KeywordRanking, Preprocessor, TextError, TokenDoc};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TrendError {
    #[error("year span {start}..={end} is empty")]
    EmptySpan { start: i32, end: i32 },
    #[error("split year {split} must satisfy {start} < split <= {end}")]
    SplitOutsideSpan { split: i32, start: i32, end: i32 },
    #[error("ranking for {year} lies outside the span {start}..={end}")]
    YearOutsideSpan { year: i32, start: i32, end: i32 },
    #[error("ranking for {year} has {len} entries, more than n = {n}")]
    RankingTooLong { year: i32, len: usize, n: usize },
    #[error(transparent)]
    Text(#[from] TextError),
}

/// One ranking per year of an inclusive span.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct YearlyRankings {
    pub start_year: i32,
    pub end_year: i32,
    pub n: usize,
    pub per_year: BTreeMap<i32, KeywordRanking>,
    /// Years without any matching document.
    pub empty_years: BTreeSet<i32>,
}

impl YearlyRankings {
    /// Build from explicit rankings; missing years get an empty ranking.
    pub fn new(
        start_year: i32,
        end_year: i32,
        n: usize,
        rankings: impl IntoIterator<Item = (i32, KeywordRanking)>,
    ) -> Result<Self, TrendError> {
        if start_year > end_year {
            return Err(TrendError::EmptySpan {
                start: start_year,
                end: end_year,
            });
        }
        let mut per_year = BTreeMap::new();
        for (year, r) in rankings {
            if year < start_year || year > end_year {
                return Err(TrendError::YearOutsideSpan {
                    year,
                    start: start_year,
                    end: end_year,
                });
            }
            if r.entries.len() > n {
                return Err(TrendError::RankingTooLong {
                    year,
                    len: r.entries.len(),
                    n,
                });
            }
            per_year.insert(year, r);
        }
        for y in start_year..=end_year {
            per_year.entry(y).or_insert_with(|| KeywordRanking {
                requested: n,
                ..Default::default()
            });
        }
        Ok(YearlyRankings {
            start_year,
            end_year,
            n,
            per_year,
            empty_years: BTreeSet::new(),
        })
    }

    /// Convenience constructor from plain keyword lists, best first.
    pub fn from_lists(start_year: i32, n: usize, lists: &[&[&str]]) -> Result<Self, TrendError> {
        let end_year = start_year + lists.len() as i32 - 1;
        let rankings = lists.iter().enumerate().map(|(i, words)| {
            let len = words.len() as u32;
            let entries = words
                .iter()
                .enumerate()
                .map(|(j, w)| crate::textkit::KeywordCount {
                    keyword: w.to_string(),
                    count: len - j as u32,
                })
                .collect();
            (
                start_year + i as i32,
                KeywordRanking {
                    entries,
                    suppressed: BTreeSet::new(),
                    requested: n,
                },
            )
        });
        Self::new(start_year, end_year, n, rankings)
    }

    pub fn years(&self) -> impl Iterator<Item = i32> {
        self.start_year..=self.end_year
    }

    pub fn ranking(&self, year: i32) -> Option<&KeywordRanking> {
        self.per_year.get(&year)
    }

    /// Midpoint split: the late half starts at `start + len / 2`.
    pub fn default_split(&self) -> i32 {
        self.start_year + (self.end_year - self.start_year + 1) / 2
    }

    /// `year,rank,keyword,count` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("year,rank,keyword,count\n");
        for (year, r) in &self.per_year {
            for (i, e) in r.entries.iter().enumerate() {
                out.push_str(&format!("{},{},{},{}\n", year, i + 1, csv_field(&e.keyword), e.count));
            }
        }
        out
    }
}

/// Rank each year of the span separately; every year is its own corpus.
pub fn keywords_per_year_tokens(
    docs: &[(i32, TokenDoc)],
    start_year: i32,
    end_year: i32,
    config: &KeywordConfig,
) -> Result<YearlyRankings, TrendError> {
    if start_year > end_year {
        return Err(TrendError::EmptySpan {
            start: start_year,
            end: end_year,
        });
    }
    let mut by_year: BTreeMap<i32, Vec<TokenDoc>> = BTreeMap::new();
    for (y, d) in docs {
        if (start_year..=end_year).contains(y) {
            by_year.entry(*y).or_default().push(d.clone());
        }
    }
    let mut rankings = Vec::new();
    let mut empty_years = BTreeSet::new();
    for y in start_year..=end_year {
        match by_year.get(&y) {
            Some(slice) => rankings.push((y, top_keywords(slice, slice, config)?)),
            None => {
                empty_years.insert(y);
            }
        }
    }
    let mut r = YearlyRankings::new(start_year, end_year, config.top_n, rankings)?;
    r.empty_years = empty_years;
    Ok(r)
}

/// Per-year rankings for the publications matching `filter` within the span.
pub fn keywords_per_year(
    pubs: &[Publication],
    filter: Option<&Filter>,
    start_year: i32,
    end_year: i32,
    config: &KeywordConfig,
    pre: &Preprocessor,
) -> Result<YearlyRankings, TrendError> {
    let docs: Vec<(i32, TokenDoc)> = pubs
        .iter()
        .filter(|p| (start_year..=end_year).contains(&p.year))
        .filter(|p| filter.is_none_or(|f| f.matches_publication(p)))
        .map(|p| (p.year, TokenDoc::from_text(p.id, &p.text(), pre)))
        .collect();
    keywords_per_year_tokens(&docs, start_year, end_year, config)
}

fn union_of<'a>(r: &'a YearlyRankings, years: impl Iterator<Item = i32>) -> BTreeSet<&'a str> {
    years
        .filter_map(|y| r.per_year.get(&y))
        .flat_map(|k| k.entries.iter().map(|e| e.keyword.as_str()))
        .collect()
}

/// Keywords ranked in some year `>= split_year` but in no earlier year.
pub fn new_keywords(r: &YearlyRankings, split_year: i32) -> Result<BTreeSet<String>, TrendError> {
    if !(r.start_year < split_year && split_year <= r.end_year) {
        return Err(TrendError::SplitOutsideSpan {
            split: split_year,
            start: r.start_year,
            end: r.end_year,
        });
    }
    let early = union_of(r, r.start_year..split_year);
    let late = union_of(r, split_year..=r.end_year);
    let out: BTreeSet<String> = late.difference(&early).map(|s| s.to_string()).collect();
    debug_assert!(out.iter().all(|k| !early.contains(k.as_str())));
    Ok(out)
}

/// Rank positions (1-based) of `keyword` per year, `None` where unranked.
pub fn rank_history(r: &YearlyRankings, keyword: &str) -> Vec<(i32, Option<usize>)> {
    r.years()
        .map(|y| (y, r.per_year.get(&y).and_then(|k| k.rank_of(keyword))))
        .collect()
}

/// Keywords ranked every year from their first appearance through the final
/// year with a position that never worsens.
pub fn rising_keywords(r: &YearlyRankings) -> BTreeSet<String> {
    let Some(last) = r.per_year.get(&r.end_year) else {
        return BTreeSet::new();
    };
    last.entries
        .iter()
        .map(|e| e.keyword.as_str())
        .filter(|k| is_rising(&rank_history(r, k)))
        .map(String::from)
        .collect()
}

fn is_rising(history: &[(i32, Option<usize>)]) -> bool {
    let ranks: Vec<Option<usize>> = history.iter().map(|(_, p)| *p).skip_while(Option::is_none).collect();
    if ranks.is_empty() || ranks.iter().any(Option::is_none) {
        return false;
    }
    ranks.windows(2).all(|w| w[1] <= w[0])
}

/// Both emerging-keyword sets for one split.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrendReport {
    pub new_keywords: BTreeSet<String>,
    pub rising_keywords: BTreeSet<String>,
    pub split_year: i32,
}

pub fn trend_report(r: &YearlyRankings, split_year: Option<i32>) -> Result<TrendReport, TrendError> {
    let split_year = split_year.unwrap_or_else(|| r.default_split());
    Ok(TrendReport {
        new_keywords: new_keywords(r, split_year)?,
        rising_keywords: rising_keywords(r),
        split_year,
    })
}
