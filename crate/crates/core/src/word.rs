use crate::error::{Error, Result};
use crate::order::{FiniteOrder, Rel};
use std::collections::HashMap;

pub type Word = Vec<usize>;

/// Parses a word written with one decimal digit per rank, e.g. "0110".
pub fn word(s: &str) -> Word {
    s.chars()
        .map(|c| c.to_digit(10).expect("decimal digit") as usize)
        .collect()
}

pub fn total2() -> FiniteOrder {
    FiniteOrder::chain(2)
}

pub fn anti2() -> FiniteOrder {
    FiniteOrder::antichain(2)
}

/// Per-rank digit alphabets. Ranks past `items` use `tail` when present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderSequence {
    pub items: Vec<FiniteOrder>,
    pub tail: Option<FiniteOrder>,
}

impl OrderSequence {
    pub fn new(items: Vec<FiniteOrder>) -> Self {
        OrderSequence { items, tail: None }
    }

    pub fn uniform(o: FiniteOrder) -> Self {
        OrderSequence {
            items: Vec::new(),
            tail: Some(o),
        }
    }

    pub fn item(&self, rank: usize) -> Option<&FiniteOrder> {
        self.items.get(rank).or(self.tail.as_ref())
    }

    /// Number of ranks, or `None` when the tail repeats forever.
    pub fn length(&self) -> Option<usize> {
        match self.tail {
            Some(_) => None,
            None => Some(self.items.len()),
        }
    }

    pub fn width(&self) -> usize {
        self.items
            .iter()
            .chain(self.tail.iter())
            .map(|o| o.len())
            .max()
            .unwrap_or(0)
    }

    /// Lists ranks explicitly up to `len`, keeping the tail for later ranks.
    pub fn materialize(&mut self, len: usize) {
        while self.items.len() < len {
            match &self.tail {
                Some(t) => self.items.push(t.clone()),
                None => break,
            }
        }
    }

    pub fn insert_rank(&mut self, pos: usize, o: FiniteOrder) {
        self.materialize(pos);
        self.items.insert(pos, o);
    }

    pub fn invert(&self) -> Self {
        OrderSequence {
            items: self.items.iter().map(|o| o.invert()).collect(),
            tail: self.tail.as_ref().map(|o| o.invert()),
        }
    }

    fn check(&self, w: &[usize]) -> Result<()> {
        for (rank, &digit) in w.iter().enumerate() {
            match self.item(rank) {
                Some(o) if digit < o.len() => {}
                _ => return Err(Error::Alphabet { rank, digit }),
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Question {
    pub rank: usize,
    pub left: usize,
    pub right: usize,
}

pub fn first_difference(x: &[usize], y: &[usize]) -> Option<Question> {
    x.iter()
        .zip(y)
        .position(|(a, b)| a != b)
        .map(|rank| Question {
            rank,
            left: x[rank],
            right: y[rank],
        })
}

pub fn question(x: &[usize], y: &[usize], seq: &OrderSequence) -> Result<Option<Question>> {
    seq.check(x)?;
    seq.check(y)?;
    Ok(first_difference(x, y))
}

pub fn next_compare(x: &[usize], y: &[usize], seq: &OrderSequence) -> Result<Rel> {
    if x == y {
        seq.check(x)?;
        return Ok(Rel::Eq);
    }
    Ok(match question(x, y, seq)? {
        None => Rel::Inc,
        Some(q) => seq.item(q.rank).unwrap().cmp(q.left, q.right),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuestionableRepresentation {
    pub alphabet: OrderSequence,
    pub words: Vec<Word>,
    pub min_length: usize,
}

impl QuestionableRepresentation {
    pub fn new(alphabet: OrderSequence, words: Vec<Word>) -> Self {
        QuestionableRepresentation {
            alphabet,
            words,
            min_length: 1,
        }
    }

    pub fn width(&self) -> usize {
        self.alphabet.width()
    }

    pub fn max_len(&self) -> usize {
        self.words.iter().map(|w| w.len()).max().unwrap_or(0)
    }

    /// Width over the ranks the words actually reach.
    pub fn used_width(&self) -> usize {
        (0..self.max_len())
            .filter_map(|r| self.alphabet.item(r))
            .map(|o| o.len())
            .max()
            .unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub ok: bool,
    /// First pair (in index order) that breaks the representation.
    pub offending: Option<(usize, usize)>,
    pub detail: String,
}

impl Report {
    pub fn pass() -> Self {
        Report {
            ok: true,
            offending: None,
            detail: String::new(),
        }
    }

    pub fn fail(x: usize, y: usize, detail: String) -> Self {
        Report {
            ok: false,
            offending: Some((x, y)),
            detail,
        }
    }
}

pub fn validate_qrep(
    host: &FiniteOrder,
    q: &QuestionableRepresentation,
    strict: bool,
) -> Result<Report> {
    let n = host.len();
    if q.words.len() != n {
        return Err(Error::Validation(format!(
            "{} words for {} elements",
            q.words.len(),
            n
        )));
    }
    let mut seen: HashMap<&[usize], usize> = HashMap::new();
    for (e, w) in q.words.iter().enumerate() {
        q.alphabet.check(w)?;
        if w.len() < q.min_length {
            return Err(Error::Length {
                element: e,
                len: w.len(),
                min: q.min_length,
            });
        }
        if let Some(&f) = seen.get(w.as_slice()) {
            return Err(Error::DuplicateWord(f, e));
        }
        seen.insert(w, e);
    }
    for x in 0..n {
        for y in x + 1..n {
            let (wx, wy) = (&q.words[x], &q.words[y]);
            let got = next_compare(wx, wy, &q.alphabet)?;
            let want = host.cmp(x, y);
            if got != want {
                return Ok(Report::fail(
                    x,
                    y,
                    format!("words give {got:?}, order has {want:?}"),
                ));
            }
            if strict && first_difference(wx, wy).is_none() {
                return Ok(Report::fail(x, y, "no question".into()));
            }
        }
    }
    Ok(Report::pass())
}
