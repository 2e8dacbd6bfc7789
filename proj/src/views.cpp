#include "brew/app.hpp"
#include "views.hpp"

namespace brew::app {

void register_views(http::ViewRegistry& views)
{
    views.add("layout", R"(<!DOCTYPE html>
<html>
<head><meta charset="utf-8"><title>{{title}} - BREW</title></head>
<body>
<nav><a href="/">BREW</a> | <a href="/comments.secu">Comments</a> | <a href="/help.secu">Help</a> | {{nav_user}}</nav>
<main>
{{content}}
</main>
{{hint_script|}}
</body>
</html>
)");

    views.add("index", R"(<h1>Welcome to BREW</h1>
<p>The coffee roasters' community board.</p>
<form method="post" action="/search.secu">
  <input name="search" placeholder="Search comments"><button type="submit">Search</button>
</form>
<p><a href="/login.secu">Log in</a> or <a href="/register.secu">register</a>.</p>
<p><a href="/redirect.secu?url=/comments.secu">Latest comments</a></p>
)");

    views.add("search", R"(<h1>Search</h1>
<form method="post" action="/search.secu">
  <input name="search"><button type="submit">Search</button>
</form>
<p>Results for: <span class="term">{{searchString}}</span></p>
<ul class="results">{{results}}</ul>
)");

    views.add("login", R"(<h1>Log in</h1>
<p class="error">{{error|}}</p>
<form method="post" action="/login.secu">
  <label>User <input name="username"></label>
  <label>Password <input name="password" type="password"></label>
  <button type="submit">Log in</button>
</form>
)");

    views.add("home", R"(<h1>Welcome, <span class="user">{{username}}</span></h1>
<p class="announcement">{{announcement|}}</p>
<h2>Members</h2>
<ul class="members">{{members}}</ul>
<p><a href="/profile.secu">Edit profile</a> | <a href="/logout.secu">Log out</a></p>
)");

    views.add("profile", R"(<h1>Profile</h1>
<form method="post" action="/profile.secu">
  <input type="hidden" name="uid" value="{{uid}}">
  {{csrf_field|}}
  <label>Name <input name="uname" value="{{uname}}"></label>
  <label>New password <input name="upwd" type="password"></label>
  <button type="submit">Save</button>
</form>
)");

    views.add("comments", R"(<h1>Comments</h1>
<ol class="comments">{{comments}}</ol>
<p><a href="/comments.secu?offset={{next_offset}}">Older comments</a></p>
<form method="post" action="/comments.secu">
  <textarea name="body"></textarea><button type="submit">Post</button>
</form>
)");

    views.add("admin", R"(<h1>Administration</h1>
<p class="announcement">{{announcement|}}</p>
<form method="post" action="/admin.secu">
  <input name="announcement"><button type="submit">Set announcement</button>
</form>
<h2>Users</h2>
<table class="users">{{users}}</table>
<p><a href="/admin/report.secu">User report</a></p>
)");

    views.add("report", R"(<h1>User report</h1>
<table class="report"><tr><th>User</th><th>Comments</th></tr>{{rows}}</table>
)");

    views.add("register", R"(<h1>Register</h1>
<p class="error">{{error|}}</p>
<form method="post" action="/register.secu">
  <label>User <input name="username"></label>
  <label>Password <input name="password" type="password"></label>
  <button type="submit">Register</button>
</form>
)");

    views.add("manager", R"(<h1>Server Manager</h1>
<p>Application: BREW, mode {{mode}}</p>
<form method="post" action="/manager.secu"><input type="hidden" name="action" value="dump"><button>Dump configuration</button></form>
<form method="post" action="/manager.secu"><input type="hidden" name="action" value="verbose-toggle"><button>Toggle verbose errors</button></form>
<form method="post" action="/manager.secu"><input type="hidden" name="action" value="shutdown"><button>Stop application</button></form>
)");

    views.add("help", R"(<h1>Help</h1>
<p>Topics: <a href="#intro">intro</a>, <a href="#search">search</a>, <a href="#comments">comments</a></p>
<div id="topic"></div>
<script src="/static/help.js"></script>
)");

    views.add("message", R"(<h1>{{heading}}</h1>
<p>{{message}}</p>
)");
}

std::string help_script(bool vulnerable)
{
    std::string head = R"(// Shows the help topic named in the URL fragment.
(function () {
  function show() {
    var topic = decodeURIComponent(location.hash.slice(1)) || 'intro';
    var el = document.getElementById('topic');
)";
    std::string sink = vulnerable ? "    el.innerHTML = 'Help topic: ' + topic;\n"
                                  : "    el.textContent = 'Help topic: ' + topic;\n";
    std::string tail = R"(  }
  window.addEventListener('hashchange', show);
  show();
})();
)";
    return head + sink + tail;
}

}  // namespace brew::app
