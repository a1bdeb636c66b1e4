//! Well-known namespaces and terms.

macro_rules! terms {
    ($ns:literal; $($konst:ident, $func:ident, $local:literal;)*) => {
        pub const NS: &str = $ns;
        $(
            pub const $konst: &str = concat!($ns, $local);
            pub fn $func() -> crate::rdf::Iri {
                crate::rdf::Iri::from_static($konst)
            }
        )*
    };
}

pub mod rdf {
    terms! { "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
        TYPE, type_, "type";
        LANG_STRING, lang_string, "langString";
        PROPERTY, property, "Property";
        FIRST, first, "first";
        REST, rest, "rest";
        NIL, nil, "nil";
    }
}

pub mod rdfs {
    terms! { "http://www.w3.org/2000/01/rdf-schema#";
        LABEL, label, "label";
        COMMENT, comment, "comment";
        DOMAIN, domain, "domain";
        RANGE, range, "range";
        SUB_CLASS_OF, sub_class_of, "subClassOf";
        SUB_PROPERTY_OF, sub_property_of, "subPropertyOf";
        CLASS, class, "Class";
    }
}

pub mod owl {
    terms! { "http://www.w3.org/2002/07/owl#";
        CLASS, class, "Class";
        OBJECT_PROPERTY, object_property, "ObjectProperty";
        DATATYPE_PROPERTY, datatype_property, "DatatypeProperty";
        ANNOTATION_PROPERTY, annotation_property, "AnnotationProperty";
        ONTOLOGY, ontology, "Ontology";
        INVERSE_OF, inverse_of, "inverseOf";
        EQUIVALENT_CLASS, equivalent_class, "equivalentClass";
        DISJOINT_WITH, disjoint_with, "disjointWith";
    }
}

pub mod xsd {
    terms! { "http://www.w3.org/2001/XMLSchema#";
        STRING, string, "string";
        BOOLEAN, boolean, "boolean";
        INTEGER, integer, "integer";
        DECIMAL, decimal, "decimal";
        DOUBLE, double, "double";
        FLOAT, float, "float";
        DATE, date, "date";
        ANY_URI, any_uri, "anyURI";
    }

    /// XSD datatypes compared numerically in FILTER expressions.
    pub const NUMERIC: &[&str] = &[
        INTEGER,
        DECIMAL,
        DOUBLE,
        FLOAT,
        concat!("http://www.w3.org/2001/XMLSchema#", "int"),
        concat!("http://www.w3.org/2001/XMLSchema#", "long"),
        concat!("http://www.w3.org/2001/XMLSchema#", "short"),
        concat!("http://www.w3.org/2001/XMLSchema#", "byte"),
        concat!("http://www.w3.org/2001/XMLSchema#", "nonNegativeInteger"),
        concat!("http://www.w3.org/2001/XMLSchema#", "positiveInteger"),
        concat!("http://www.w3.org/2001/XMLSchema#", "negativeInteger"),
        concat!("http://www.w3.org/2001/XMLSchema#", "nonPositiveInteger"),
        concat!("http://www.w3.org/2001/XMLSchema#", "unsignedInt"),
        concat!("http://www.w3.org/2001/XMLSchema#", "unsignedLong"),
    ];
}

pub mod dcterms {
    terms! { "http://purl.org/dc/terms/";
        TYPE, type_, "type";
        DATE, date, "date";
        IS_VERSION_OF, is_version_of, "isVersionOf";
        CONTRIBUTOR, contributor, "contributor";
        ABSTRACT, abstract_, "abstract";
        REFERENCES, references, "references";
        ACCESS_RIGHTS, access_rights, "accessRights";
        LANGUAGE, language, "language";
        IDENTIFIER, identifier, "identifier";
    }
}
