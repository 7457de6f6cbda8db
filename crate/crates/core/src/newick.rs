//! Newick input and output for binary shapes.
//!
//! Accepted grammar:
//!
//! ```text
//! Tree    := Subtree ";"
//! Subtree := Leaf | "(" Subtree "," Subtree ")" Label? Length?
//! Leaf    := Label? Length?
//! Label   := unquoted run without `(),:;` or whitespace | 'single quoted'
//! Length  := ":" decimal
//! ```
//!
//! Labels and branch lengths are validated and dropped; child order is
//! canonicalized. Output is unlabeled, in canonical order, with a trailing
//! `;`.

use thiserror::Error;

use crate::tree::TreeShape;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NewickError {
    #[error("newick syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("non-binary node opened at byte {pos}: {children} children (expected 2)")]
    NonBinary { pos: usize, children: usize },
}

fn syntax(pos: usize, msg: impl Into<String>) -> NewickError {
    NewickError::Syntax {
        pos,
        msg: msg.into(),
    }
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn label(&mut self) -> Result<(), NewickError> {
        self.skip_ws();
        match self.peek() {
            Some(b'\'') => {
                let start = self.pos;
                self.pos += 1;
                loop {
                    match self.peek() {
                        None => return Err(syntax(start, "unterminated quoted label")),
                        Some(b'\'') if self.src.get(self.pos + 1) == Some(&b'\'') => {
                            self.pos += 2;
                        }
                        Some(b'\'') => {
                            self.pos += 1;
                            return Ok(());
                        }
                        Some(_) => self.pos += 1,
                    }
                }
            }
            _ => {
                while let Some(c) = self.peek() {
                    if matches!(c, b'(' | b')' | b',' | b':' | b';' | b'\'')
                        || c.is_ascii_whitespace()
                    {
                        break;
                    }
                    self.pos += 1;
                }
                Ok(())
            }
        }
    }

    fn length(&mut self) -> Result<(), NewickError> {
        self.skip_ws();
        if self.peek() != Some(b':') {
            return Ok(());
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() || matches!(c, b'.' | b'-' | b'+' | b'e' | b'E') {
                self.pos += 1;
            } else {
                break;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        if text.parse::<f64>().is_err() {
            return Err(syntax(start, "expected a decimal branch length after ':'"));
        }
        Ok(())
    }

    fn label_and_length(&mut self) -> Result<(), NewickError> {
        self.label()?;
        self.length()
    }
}

/// Parses one Newick tree into its canonical shape.
pub fn parse_newick(s: &str) -> Result<TreeShape, NewickError> {
    let mut cur = Cursor {
        src: s.as_bytes(),
        pos: 0,
    };
    // Open groups: byte offset of '(' and the subtrees read so far.
    let mut open: Vec<(usize, Vec<TreeShape>)> = Vec::new();

    let root = 'subtree: loop {
        cur.skip_ws();
        let mut done = if cur.peek() == Some(b'(') {
            open.push((cur.pos, Vec::new()));
            cur.pos += 1;
            continue 'subtree;
        } else {
            cur.label_and_length()?;
            TreeShape::leaf()
        };
        loop {
            cur.skip_ws();
            let Some((start, kids)) = open.last_mut() else {
                break 'subtree done;
            };
            kids.push(done);
            match cur.peek() {
                Some(b',') => {
                    cur.pos += 1;
                    continue 'subtree;
                }
                Some(b')') => {
                    let start = *start;
                    cur.pos += 1;
                    let (_, mut kids) = open.pop().expect("open group");
                    if kids.len() != 2 {
                        return Err(NewickError::NonBinary {
                            pos: start,
                            children: kids.len(),
                        });
                    }
                    let b = kids.pop().expect("two children");
                    let a = kids.pop().expect("two children");
                    done = TreeShape::node(a, b);
                    cur.label_and_length()?;
                }
                Some(c) => {
                    return Err(syntax(
                        cur.pos,
                        format!("expected ',' or ')', found '{}'", c as char),
                    ))
                }
                None => return Err(syntax(cur.pos, "unexpected end of input inside '('")),
            }
        }
    };

    cur.skip_ws();
    match cur.peek() {
        Some(b';') => cur.pos += 1,
        Some(c) => {
            return Err(syntax(
                cur.pos,
                format!("expected ';', found '{}'", c as char),
            ))
        }
        None => return Err(syntax(cur.pos, "missing terminating ';'")),
    }
    cur.skip_ws();
    if cur.pos != cur.src.len() {
        return Err(syntax(cur.pos, "trailing characters after ';'"));
    }
    Ok(root)
}

/// Unlabeled Newick in canonical child order.
pub fn to_newick(t: &TreeShape) -> String {
    enum Step<'a> {
        Visit(&'a TreeShape),
        Text(&'static str),
    }
    let mut out = String::with_capacity(4 * t.leaf_count().min(1 << 20) as usize);
    let mut stack = vec![Step::Visit(t)];
    while let Some(step) = stack.pop() {
        match step {
            Step::Text(s) => out.push_str(s),
            Step::Visit(node) => {
                if let Some((a, b)) = node.children() {
                    out.push('(');
                    stack.push(Step::Text(")"));
                    stack.push(Step::Visit(b));
                    stack.push(Step::Text(","));
                    stack.push(Step::Visit(a));
                }
            }
        }
    }
    out.push(';');
    out
}
