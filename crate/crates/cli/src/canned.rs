//! The nine shipped queries: five corpus selections and four policy-mapping
//! lists. Each is a filter tree plus the equivalent SQL text.

use bibcorpus_core::filter::{Filter, Order, Query};
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum CannedName {
    Q1,
    Q2,
    Q3,
    Q4,
    Q5,
    Q6,
    Q7,
    Q8,
    Q9,
}

impl CannedName {
    pub const ALL: [CannedName; 9] = [
        CannedName::Q1,
        CannedName::Q2,
        CannedName::Q3,
        CannedName::Q4,
        CannedName::Q5,
        CannedName::Q6,
        CannedName::Q7,
        CannedName::Q8,
        CannedName::Q9,
    ];
}

impl fmt::Display for CannedName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for CannedName {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        CannedName::ALL
            .into_iter()
            .find(|q| q.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CannedQuery {
    pub name: CannedName,
    pub description: &'static str,
    pub query: Query,
    /// The same selection in the store's SQL dialect.
    pub sql: String,
}

fn any_of(words: &[&str]) -> Filter {
    if words.len() == 1 {
        Filter::text(words[0])
    } else {
        Filter::Or(words.iter().map(|w| Filter::text(w)).collect())
    }
}

fn sql_any_of(words: &[&str]) -> String {
    let parts: Vec<String> = words
        .iter()
        .map(|w| format!("lower(title) LIKE '%{w}%' OR lower(abstract) LIKE '%{w}%'"))
        .collect();
    format!("({})", parts.join(" OR "))
}

const DECADE: (i32, i32) = (2009, 2018);

fn selection(first: &[&str], second: &[&str], years: bool) -> (Filter, String) {
    let mut parts = Vec::new();
    let mut sql = Vec::new();
    if years {
        parts.push(Filter::year(DECADE.0, DECADE.1));
        sql.push(format!("year BETWEEN {} AND {}", DECADE.0, DECADE.1));
    }
    parts.push(any_of(first));
    sql.push(sql_any_of(first));
    parts.push(any_of(second));
    sql.push(sql_any_of(second));
    (Filter::And(parts), format!("SELECT * FROM publications WHERE {}", sql.join(" AND ")))
}

pub fn canned(name: CannedName) -> CannedQuery {
    use CannedName::*;
    let (description, first, second, years, order): (&str, &[&str], &[&str], bool, Order) = match name {
        Q1 => ("workflow scheduling, 2009-2018", &["workflow"], &["schedul"], true, Order::Id),
        Q2 => ("workflow formalisms and languages, 2009-2018", &["workflow"], &["formalism", "language"], true, Order::Id),
        Q3 => ("workflow allocation, 2009-2018", &["workflow"], &["schedul", "plan", "allocat"], true, Order::Id),
        Q4 => ("workflow provisioning, 2009-2018", &["workflow"], &["provision", "autoscal"], true, Order::Id),
        Q5 => ("cloud computing services, 2009-2018", &["cloud"], &["service"], true, Order::Id),
        Q6 => ("allocation policies, most cited", &["workflow"], &["allocat", "schedul", "plan"], false, Order::CitationsDesc),
        Q7 => ("allocation policies, most recent", &["workflow"], &["allocat", "schedul", "plan"], false, Order::YearDescCitationsDesc),
        Q8 => ("provisioning policies, most cited", &["workflow"], &["provision", "autoscal"], false, Order::CitationsDesc),
        Q9 => ("provisioning policies, most recent", &["workflow"], &["provision", "autoscal"], false, Order::YearDescCitationsDesc),
    };
    let (filter, mut sql) = selection(first, second, years);
    match order {
        Order::Id => {}
        Order::CitationsDesc => sql.push_str(" ORDER BY n_citations DESC"),
        Order::YearDescCitationsDesc => sql.push_str(" ORDER BY year DESC, n_citations DESC"),
    }
    CannedQuery {
        name,
        description,
        query: Query::new(filter).ordered(order),
        sql,
    }
}
