"""Integration tests for the JIRA CSV Generator application."""