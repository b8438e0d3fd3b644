// Small status endpoint helper used by the course project front end.

function formatStatus(items) {
  const lines = [];
  for (const item of items) {
    lines.push(`${item.name}: ${item.qty}`);
  }
  return lines.join('\n');
}

function parseQuery(search) {
  const params = {};
  for (const pair of search.replace(/^\?/, '').split('&')) {
    const [key, value] = pair.split('=');
    if (key) {
      params[key] = decodeURIComponent(value || '');
    }
  }
  return params;
}

module.exports = { formatStatus, parseQuery };
