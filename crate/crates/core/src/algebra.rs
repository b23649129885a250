//! Finite algebras given by total operation tables.
//!
//! The universe of an algebra of size `k` is always `0..k`. Operation tables are stored in
//! lexicographic argument order with the last argument varying fastest, so the entry for
//! `f(a_1, ..., a_r)` lives at index `a_1 * k^(r-1) + ... + a_r`.

use std::fmt;

use thiserror::Error;

/// A universe element, always in `0..size`.
pub type Element = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("algebra size must be positive")]
    EmptyUniverse,
    #[error("operation `{name}` of arity {arity} needs {expected} table entries, got {got}")]
    TableLength {
        name: String,
        arity: usize,
        expected: usize,
        got: usize,
    },
    #[error("operation `{name}` has entry {value} at position {position}, outside universe of size {size}")]
    EntryOutOfRange {
        name: String,
        position: usize,
        value: Element,
        size: usize,
    },
    #[error("duplicate operation name `{0}`")]
    DuplicateOperation(String),
    #[error("table for arity {arity} over a universe of size {size} is too large")]
    TableTooLarge { size: usize, arity: usize },
}

/// `size^arity`, or `None` on overflow.
pub(crate) fn table_len(size: usize, arity: usize) -> Option<usize> {
    size.checked_pow(u32::try_from(arity).ok()?)
}

/// A named basic operation with its full table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Operation {
    name: String,
    arity: usize,
    table: Vec<Element>,
}

impl Operation {
    /// Builds an operation without checking the table against a universe. The check happens
    /// when the operation is added to a [`FiniteAlgebra`].
    pub fn new(name: impl Into<String>, arity: usize, table: Vec<Element>) -> Self {
        Operation {
            name: name.into(),
            arity,
            table,
        }
    }

    /// Tabulates `f` over every argument tuple of `0..size` in lexicographic order.
    pub fn from_fn<F>(
        name: impl Into<String>,
        size: usize,
        arity: usize,
        mut f: F,
    ) -> Result<Self, AlgebraError>
    where
        F: FnMut(&[Element]) -> Element,
    {
        let len = table_len(size, arity).ok_or(AlgebraError::TableTooLarge { size, arity })?;
        let mut args = vec![0 as Element; arity];
        let mut table = Vec::with_capacity(len);
        for _ in 0..len {
            table.push(f(&args));
            // odometer, last position fastest
            for slot in args.iter_mut().rev() {
                *slot += 1;
                if (*slot as usize) < size {
                    break;
                }
                *slot = 0;
            }
        }
        Ok(Operation::new(name, arity, table))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn table(&self) -> &[Element] {
        &self.table
    }
}

/// A finite algebra: universe `0..size` plus an ordered list of uniquely named operations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteAlgebra {
    name: String,
    size: usize,
    operations: Vec<Operation>,
}

impl FiniteAlgebra {
    pub fn new(
        name: impl Into<String>,
        size: usize,
        operations: Vec<Operation>,
    ) -> Result<Self, AlgebraError> {
        if size == 0 {
            return Err(AlgebraError::EmptyUniverse);
        }
        let mut alg = FiniteAlgebra {
            name: name.into(),
            size,
            operations: Vec::with_capacity(operations.len()),
        };
        for op in operations {
            alg.push_operation(op)?;
        }
        Ok(alg)
    }

    /// Adds an operation after validating its table.
    pub fn push_operation(&mut self, op: Operation) -> Result<(), AlgebraError> {
        let expected = table_len(self.size, op.arity).ok_or(AlgebraError::TableTooLarge {
            size: self.size,
            arity: op.arity,
        })?;
        if op.table.len() != expected {
            return Err(AlgebraError::TableLength {
                name: op.name.clone(),
                arity: op.arity,
                expected,
                got: op.table.len(),
            });
        }
        if let Some((position, &value)) = op
            .table
            .iter()
            .enumerate()
            .find(|(_, &v)| v as usize >= self.size)
        {
            return Err(AlgebraError::EntryOutOfRange {
                name: op.name.clone(),
                position,
                value,
                size: self.size,
            });
        }
        if self.operation_index(&op.name).is_some() {
            return Err(AlgebraError::DuplicateOperation(op.name));
        }
        self.operations.push(op);
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn operations(&self) -> &[Operation] {
        &self.operations
    }

    pub fn operation(&self, name: &str) -> Option<&Operation> {
        self.operations.iter().find(|op| op.name == name)
    }

    pub fn operation_index(&self, name: &str) -> Option<usize> {
        self.operations.iter().position(|op| op.name == name)
    }

    /// Index into an operation table for the given arguments.
    #[inline]
    pub fn table_index(&self, args: &[Element]) -> usize {
        args.iter()
            .fold(0usize, |acc, &a| acc * self.size + a as usize)
    }

    /// Applies the operation at `op_index` to `args`. Panics if the arity is wrong.
    #[inline]
    pub fn apply(&self, op_index: usize, args: &[Element]) -> Element {
        let op = &self.operations[op_index];
        assert_eq!(op.arity, args.len(), "arity mismatch for `{}`", op.name);
        op.table[self.table_index(args)]
    }

    /// A copy of this algebra keeping only the named operations, in the given order.
    pub fn reduct(&self, name: impl Into<String>, keep: &[&str]) -> Option<FiniteAlgebra> {
        let operations = keep
            .iter()
            .map(|n| self.operation(n).cloned())
            .collect::<Option<Vec<_>>>()?;
        FiniteAlgebra::new(name, self.size, operations).ok()
    }
}

impl fmt::Display for FiniteAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (size {}; ", self.name, self.size)?;
        for (i, op) in self.operations.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}/{}", op.name, op.arity)?;
        }
        write!(f, ")")
    }
}
