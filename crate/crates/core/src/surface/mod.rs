//! Surface language: lexer, parser and printer.

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod print;

pub use ast::{Binder, BinderPlicity, DeclKind, SourceSpan, SurfaceDecl, SurfaceTerm, TermKind};
pub use lexer::{lex, lex_file, LexError, Spanned, Token};
pub use parser::{parse_file, parse_file_named, parse_term, parse_term_named, ParseError};
pub use print::{print_decl, print_surface};
