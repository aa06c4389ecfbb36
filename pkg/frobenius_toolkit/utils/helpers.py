"""
Helper Utilities

This module provides utility functions used across the toolkit: output
directories, date-stamped report names, exact rational formatting and the
versioned JSON envelope shared by every emitted certificate.
"""

import os
import re
import json
import logging
from datetime import datetime
from fractions import Fraction

import pandas as pd

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

def ensure_directory_exists(directory_path):
    """
    Ensure that a directory exists, creating it if necessary.

    Args:
        directory_path (str): Path to the directory.

    Returns:
        bool: True if the directory exists or was created, False otherwise.
    """
    try:
        os.makedirs(directory_path, exist_ok=True)
        return True
    except Exception as e:
        logger.error(f"Error creating directory {directory_path}: {str(e)}")
        return False

def generate_filename(prefix, extension, include_date=True):
    """
    Generate a report filename with an optional date component.

    Args:
        prefix (str): Prefix for the filename.
        extension (str): File extension (without the dot).
        include_date (bool): Whether to include the date in the filename.

    Returns:
        str: Generated filename.
    """
    prefix = sanitize_filename(prefix)
    if include_date:
        today_date = datetime.today().strftime("%Y-%m-%d")
        return f"{prefix}_{today_date}.{extension}"
    return f"{prefix}.{extension}"

def sanitize_filename(filename):
    """
    Sanitize a filename by removing invalid characters.

    Args:
        filename (str): Filename to sanitize.

    Returns:
        str: Sanitized filename.
    """
    # Replace invalid characters with underscores
    return re.sub(r'[\\/*?:"<>|\s]', "_", filename)

def format_rational(value):
    """
    Format an exact rational as "p/q", or "p" when it is an integer.

    Args:
        value (Fraction or int): Value to format.

    Returns:
        str: Exact string form.
    """
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"

def parse_rational(text):
    """
    Parse the exact string form produced by format_rational.

    Args:
        text (str or int): "p/q", "p" or an integer.

    Returns:
        Fraction: Parsed value.
    """
    if isinstance(text, int):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"Not an exact rational: {text!r}") from e

def json_envelope(kind, payload):
    """
    Wrap a payload in the versioned document layout.

    Args:
        kind (str): Document kind tag, e.g. "support" or "rmatrix".
        payload (dict): Body of the document.

    Returns:
        dict: Document with "schema" and "kind" leading.
    """
    document = {"schema": SCHEMA_VERSION, "kind": kind}
    document.update(payload)
    return document

def dump_json(document):
    """Serialize a document deterministically."""
    return json.dumps(document, indent=2, ensure_ascii=False) + "\n"

def load_json_document(file_path):
    """
    Load a toolkit JSON document and check its schema version.

    Args:
        file_path (str): Path to the JSON file.

    Returns:
        dict: Parsed document.
    """
    with open(file_path, "r", encoding="utf-8") as fh:
        document = json.load(fh)
    if document.get("schema") != SCHEMA_VERSION:
        raise ValueError(f"Unsupported schema in {file_path}: {document.get('schema')!r}")
    return document

def write_text_output(text, file_path=None):
    """
    Write an artifact to a file, or return it for stdout when no path is given.

    Args:
        text (str): Artifact text.
        file_path (str, optional): Destination path.

    Returns:
        bool: True if the text was written to the file.
    """
    if not file_path:
        return False
    directory = os.path.dirname(os.path.abspath(file_path))
    if not ensure_directory_exists(directory):
        return False
    with open(file_path, "w", encoding="utf-8") as fh:
        fh.write(text)
    logger.info(f"Wrote {file_path}")
    return True

def load_report_file(file_path):
    """
    Load a sweep report (.xlsx or .csv) into a pandas DataFrame.

    Args:
        file_path (str): Path to the report.

    Returns:
        DataFrame or None: Loaded DataFrame or None if an error occurred.
    """
    try:
        if file_path.endswith(".csv"):
            return pd.read_csv(file_path)
        return pd.read_excel(file_path)
    except Exception as e:
        logger.error(f"Error loading report {file_path}: {str(e)}")
        return None

def save_report_file(df, file_path):
    """
    Save a sweep report. The format follows the extension: .csv, otherwise Excel.

    Args:
        df (DataFrame): Report to save.
        file_path (str): Path to save the report.

    Returns:
        bool: True if the file was saved successfully, False otherwise.
    """
    try:
        directory = os.path.dirname(os.path.abspath(file_path))
        ensure_directory_exists(directory)
        if file_path.endswith(".csv"):
            df.to_csv(file_path, index=False)
        else:
            df.to_excel(file_path, index=False)
        logger.info(f"Saved report to {file_path}")
        return True
    except Exception as e:
        logger.error(f"Error saving report {file_path}: {str(e)}")
        return False
